#include "fockline/channels.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fockline/common.hpp"
#include "fockline/kravchuk.hpp"

namespace fockline {

namespace {

void check_mode(const FockDensityOperator& rho, int mode, const char* who) {
  if (mode < 0 || mode >= rho.mode_count())
    throw std::domain_error(std::string(who) + ": mode out of range");
}

double binom_d(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Damping factor carrying |n><n'| to |n-p><n'-p|:
// sqrt(binom(n,p) binom(n',p)) t^{(n+n')/2 - p} r^p.
double loss_factor(int n, int np, int p, double t, double r) {
  double tp = std::pow(t, 0.5 * (n + np) - p);
  return std::sqrt(binom_d(n, p) * binom_d(np, p)) * tp * std::pow(r, p);
}

using Contribution = std::vector<std::pair<EntryKey, cplx>>;

// Parallel per-entry expansion with a sequential merge in input order, so the
// result is identical for any worker count.
template <typename ExpandFn>
FockDensityOperator expand_entries(const FockDensityOperator& rho, int out_modes,
                                   int out_n_max, int out_total, ExpandFn&& expand) {
  std::vector<const std::pair<const EntryKey, cplx>*> items;
  items.reserve(rho.entries().size());
  for (const auto& e : rho.entries()) items.push_back(&e);

  std::vector<Contribution> contrib(items.size());
  const int threads = worker_count();
#pragma omp parallel for schedule(static) num_threads(threads) if (items.size() > 512)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(items.size()); ++i)
    expand(items[i]->first, items[i]->second, contrib[i]);

  FockDensityOperator out(out_modes, out_n_max, out_total);
  for (const auto& c : contrib)
    for (const auto& [key, v] : c) out.add(key.bra, key.ket, v);
  return out;
}

FockDensityOperator loss_kernel(const FockDensityOperator& rho, int mode, double r) {
  const double t = 1.0 - r;
  return expand_entries(
      rho, rho.mode_count(), rho.n_max(), rho.total_max(),
      [&](const EntryKey& key, cplx v, Contribution& out) {
        int nk = key.ket[mode], nb = key.bra[mode];
        for (int p = 0; p <= std::min(nk, nb); ++p) {
          double w = loss_factor(nk, nb, p, t, r);
          if (w == 0.0) continue;
          EntryKey k2 = key;
          k2.ket[mode] = static_cast<std::uint16_t>(nk - p);
          k2.bra[mode] = static_cast<std::uint16_t>(nb - p);
          out.emplace_back(k2, w * v);
        }
      });
}

// Reference route: couple the mode to a fresh vacuum ancilla through the loss
// BS, |n,0> -> sum_p sqrt(binom(n,p) t^{n-p} r^p) |n-p, p>, then trace it out.
FockDensityOperator loss_ancilla(const FockDensityOperator& rho, int mode, double r) {
  if (rho.mode_count() + 1 > kMaxModes)
    throw std::domain_error("loss_channel: no room for the ancilla mode");
  const double t = 1.0 - r;
  const int anc = rho.mode_count();
  FockDensityOperator big(rho.mode_count() + 1, rho.n_max(),
                          rho.total_max() + rho.n_max());
  for (const auto& [key, v] : rho.entries()) {
    int nk = key.ket[mode], nb = key.bra[mode];
    for (int p = 0; p <= nk; ++p) {
      double ak = std::sqrt(binom_d(nk, p) * std::pow(t, nk - p) * std::pow(r, p));
      if (ak == 0.0) continue;
      for (int q = 0; q <= nb; ++q) {
        double ab = std::sqrt(binom_d(nb, q) * std::pow(t, nb - q) * std::pow(r, q));
        if (ab == 0.0) continue;
        EntryKey k2 = key;
        k2.ket[mode] = static_cast<std::uint16_t>(nk - p);
        k2.ket[anc] = static_cast<std::uint16_t>(p);
        k2.bra[mode] = static_cast<std::uint16_t>(nb - q);
        k2.bra[anc] = static_cast<std::uint16_t>(q);
        big.add(k2.bra, k2.ket, ak * ab * v);
      }
    }
  }
  return partial_trace(big, {anc});
}

}  // namespace

void LossConfig::validate() const {
  for (double r : {r_a2, r_b2, r_a1, r_b1, r_d1, r_d2})
    if (!(r >= 0.0 && r <= 1.0))
      throw std::domain_error("LossConfig: reflectivity outside [0,1]");
}

FockDensityOperator loss_channel(const FockDensityOperator& rho, int mode, double r,
                                 LossBackend backend) {
  check_mode(rho, mode, "loss_channel");
  if (!(r >= 0.0 && r <= 1.0))
    throw std::domain_error("loss_channel: reflectivity outside [0,1]");
  return backend == LossBackend::kernel ? loss_kernel(rho, mode, r)
                                        : loss_ancilla(rho, mode, r);
}

FockDensityOperator balanced_bs(const FockDensityOperator& rho, int mode_i, int mode_j) {
  check_mode(rho, mode_i, "balanced_bs");
  check_mode(rho, mode_j, "balanced_bs");
  if (mode_i == mode_j) throw std::domain_error("balanced_bs: modes must differ");

  // the pair total is conserved, so the per-mode bound grows to it
  int pair_max = std::min(2 * rho.n_max(), rho.total_max());
  int out_n_max = std::max(rho.n_max(), pair_max);
  return expand_entries(
      rho, rho.mode_count(), out_n_max, rho.total_max(),
      [&](const EntryKey& key, cplx v, Contribution& out) {
        const int sk = key.ket[mode_i] + key.ket[mode_j];
        const int sb = key.bra[mode_i] + key.bra[mode_j];
        const auto& tk = BsAmplitudeTable::get(sk);
        const auto& tb = BsAmplitudeTable::get(sb);
        for (int ok = 0; ok <= sk; ++ok) {
          cplx ampk = tk.amplitude(ok, key.ket[mode_i]);
          if (ampk == cplx{}) continue;
          for (int ob = 0; ob <= sb; ++ob) {
            cplx ampb = tb.amplitude(ob, key.bra[mode_i]);
            if (ampb == cplx{}) continue;
            EntryKey k2 = key;
            k2.ket[mode_i] = static_cast<std::uint16_t>(ok);
            k2.ket[mode_j] = static_cast<std::uint16_t>(sk - ok);
            k2.bra[mode_i] = static_cast<std::uint16_t>(ob);
            k2.bra[mode_j] = static_cast<std::uint16_t>(sb - ob);
            out.emplace_back(k2, v * ampb * std::conj(ampk));
          }
        }
      });
}

double db_to_reflectivity(double attenuation_db) {
  if (attenuation_db < 0.0)
    throw std::domain_error("db_to_reflectivity: negative attenuation");
  return 1.0 - std::pow(10.0, -attenuation_db / 10.0);
}

}  // namespace fockline
