#include "fockline/protocol.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fockline/common.hpp"
#include "fockline/kravchuk.hpp"
#include "fockline/schmidt.hpp"

namespace fockline {

namespace {

double binom_d(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

unsigned long long exact_binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw std::domain_error("exact_binom: value exceeds 64 bits");
  }
  return static_cast<unsigned long long>(r);
}

// P(k detected | j arrived) for a detector behind a loss port of reflectivity r.
double detector_weight(int j, int k, double r) {
  if (k > j) return 0.0;
  return binom_d(j, k) * std::pow(1.0 - r, k) * std::pow(r, j - k);
}

struct Derived {
  int n_max;
  int sigma_max;
};

Derived derive(const PipelineConfig& c) {
  if (!(c.g > 0.0)) throw std::domain_error("simulate_pipeline: gain must be positive");
  int n_max = c.n_max >= 0 ? c.n_max : schmidt_cutoff(c.g, c.cutoff_tol);
  int sigma_max = c.sigma_max >= 0 ? c.sigma_max : 2 * n_max;
  return {n_max, sigma_max};
}

std::vector<Readout> readout_list(const PipelineConfig& c, int sigma_max) {
  std::vector<Readout> list;
  if (c.readout) {
    if (c.readout->sigma < 0 || c.readout->k < 0 || c.readout->k > c.readout->sigma)
      throw std::domain_error("simulate_pipeline: malformed readout");
    list.push_back(*c.readout);
  } else {
    for (int sigma = 0; sigma <= sigma_max; ++sigma)
      for (int k = 0; k <= sigma; ++k) list.push_back({k, sigma});
  }
  return list;
}

void check_sector(int sigma, int k, const char* who) {
  if (sigma < 0 || k < 0 || k > sigma)
    throw std::domain_error(std::string(who) + ": readout indices out of range");
}

}  // namespace

const char* to_string(ResultSource s) {
  switch (s) {
    case ResultSource::simulated: return "simulated";
    case ResultSource::closed_form_lossless: return "closed_form_lossless";
    case ResultSource::closed_form_symmetric: return "closed_form_symmetric";
    case ResultSource::closed_form_epsilon: return "closed_form_epsilon";
  }
  return "unknown";
}

FockDensityOperator lossless_output_state(int S, int k) {
  check_sector(S, k, "lossless_output_state");
  const auto& t = BsAmplitudeTable::get(S);
  FockDensityOperator rho(2, S);
  for (int n = 0; n <= S; ++n)
    for (int m = 0; m <= S; ++m)
      rho.add(make_occ({n, S - n}), make_occ({m, S - m}),
              t.amplitude(k, n) * std::conj(t.amplitude(k, m)));
  return rho;
}

std::vector<ConditionalResult> simulate_pipeline(const PipelineConfig& config) {
  config.losses.validate();
  const auto [n_max, sigma_max] = derive(config);
  const auto readouts = readout_list(config, sigma_max);

  const auto spectrum = schmidt_weights(config.g, n_max);
  const auto source = sv_pure_state(spectrum);
  const auto rho_a = loss_channel(
      loss_channel(source, 0, config.losses.r_a1, config.loss_backend), 1,
      config.losses.r_a2, config.loss_backend);
  const auto rho_b = loss_channel(
      loss_channel(source, 0, config.losses.r_b1, config.loss_backend), 1,
      config.losses.r_b2, config.loss_backend);
  const double norm = rho_a.trace() * rho_b.trace();

  // After the detector projection only blocks diagonal in the detector pair
  // survive, so the beam splitter is fused with the projection: each joint
  // entry scatters straight into signal-space blocks labeled by (j1, j2).
  // Entries pair up only when their idler bra/ket totals agree, so Bob's
  // entries are grouped by the idler imbalance first.
  using EntryPtr = const std::pair<const EntryKey, cplx>*;
  std::vector<EntryPtr> items_a;
  items_a.reserve(rho_a.entries().size());
  for (const auto& e : rho_a.entries()) items_a.push_back(&e);
  std::map<int, std::vector<EntryPtr>> items_b;
  for (const auto& e : rho_b.entries())
    items_b[e.first.bra[1] - e.first.ket[1]].push_back(&e);

  struct BlockTerm {
    int j1, j2;
    EntryKey key;
    cplx v;
  };
  std::vector<std::vector<BlockTerm>> contrib(items_a.size());
  const int threads = config.parallel ? worker_count() : 1;
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(items_a.size()); ++i) {
    const EntryKey& ka = items_a[i]->first;
    const cplx va = items_a[i]->second;
    auto it = items_b.find(ka.ket[1] - ka.bra[1]);
    if (it == items_b.end()) continue;
    for (EntryPtr eb : it->second) {
      const EntryKey& kb = eb->first;
      const int s = ka.bra[1] + kb.bra[1];  // bra and ket totals coincide
      const auto& t = BsAmplitudeTable::get(s);
      EntryKey out{};
      out.bra[0] = ka.bra[0];
      out.bra[1] = kb.bra[0];
      out.ket[0] = ka.ket[0];
      out.ket[1] = kb.ket[0];
      const cplx w = va * eb->second;
      for (int j1 = 0; j1 <= s; ++j1) {
        cplx amp = t.amplitude(j1, ka.bra[1]) * std::conj(t.amplitude(j1, ka.ket[1]));
        if (amp == cplx{}) continue;
        contrib[i].push_back({j1, s - j1, out, w * amp});
      }
    }
  }

  // sequential merge in entry order keeps the result thread-count independent
  std::map<std::pair<int, int>, std::map<EntryKey, cplx>> blocks;
  for (const auto& c : contrib)
    for (const auto& term : c) blocks[{term.j1, term.j2}][term.key] += term.v;

  std::vector<ConditionalResult> results;
  results.reserve(readouts.size());
  for (const auto& ro : readouts) {
    const int k2 = ro.sigma - ro.k;
    FockDensityOperator cond(2, n_max);
    for (const auto& [jj, entries] : blocks) {
      const double w = detector_weight(jj.first, ro.k, config.losses.r_d1) *
                       detector_weight(jj.second, k2, config.losses.r_d2);
      if (w == 0.0) continue;
      for (const auto& [key, v] : entries) cond.add(key.bra, key.ket, w * v);
    }
    ConditionalResult res;
    res.k = ro.k;
    res.sigma = ro.sigma;
    res.source = ResultSource::simulated;
    const double p = cond.trace();
    if (p > 0.0 && norm > 0.0) {
      res.probability = p / norm;
      cond.scale(1.0 / p);
      res.e_n = log_negativity(cond, {{0}, {1}});
      res.e_n_defined = true;
      res.state = std::move(cond);
    } else {
      res.state = FockDensityOperator(2, n_max);
    }
    results.push_back(std::move(res));
  }
  return results;
}

namespace ref {

std::vector<ConditionalResult> simulate_pipeline(const PipelineConfig& config) {
  config.losses.validate();
  const auto [n_max, sigma_max] = derive(config);
  const auto readouts = readout_list(config, sigma_max);

  const auto spectrum = schmidt_weights(config.g, n_max);
  const auto source = sv_pure_state(spectrum);
  auto rho_a = loss_channel(
      loss_channel(source, 0, config.losses.r_a1, LossBackend::ancilla), 1,
      config.losses.r_a2, LossBackend::ancilla);
  auto rho_b = loss_channel(
      loss_channel(source, 0, config.losses.r_b1, LossBackend::ancilla), 1,
      config.losses.r_b2, LossBackend::ancilla);

  auto rho = tensor(rho_a, rho_b);  // modes a1, a2, b1, b2
  rho = balanced_bs(rho, 1, 3);
  rho = loss_channel(rho, 1, config.losses.r_d1, LossBackend::ancilla);
  rho = loss_channel(rho, 3, config.losses.r_d2, LossBackend::ancilla);

  std::vector<ConditionalResult> results;
  results.reserve(readouts.size());
  for (const auto& ro : readouts) {
    FockProjector proj{{1, 3}, {ro.k, ro.sigma - ro.k}};
    auto pr = project_and_renormalize(rho, proj);
    ConditionalResult res;
    res.k = ro.k;
    res.sigma = ro.sigma;
    res.source = ResultSource::simulated;
    if (!pr.empty) {
      res.probability = pr.probability;
      res.state = partial_trace(pr.state, {1, 3});
      res.e_n = log_negativity(res.state, {{0}, {1}});
      res.e_n_defined = true;
    } else {
      res.state = FockDensityOperator(2, n_max);
    }
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace ref

double chi_weight(double g, double r, int sigma, int S) {
  if (!(g > 0.0)) throw std::domain_error("chi_weight: gain must be positive");
  if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("chi_weight: reflectivity outside [0,1]");
  if (sigma < 0 || S < sigma) throw std::domain_error("chi_weight: need S >= sigma >= 0");
  const double th = std::tanh(g), ch = std::cosh(g);
  const double lam = std::pow(th, 2.0 * S) / (ch * ch);
  return std::pow(r, double(S - sigma)) * lam * binom_d(S + 1, sigma + 1);
}

FockDensityOperator Decomposition::combined() const {
  if (terms.empty()) return {};
  const int top = terms.back().S;
  FockDensityOperator out(2, top);
  double wsum = 0.0;
  for (const auto& term : terms) {
    wsum += term.chi;
    for (const auto& [key, v] : term.rho_int.entries())
      out.add(key.bra, key.ket, term.chi * v);
  }
  if (wsum > 0.0) out.scale(1.0 / wsum);
  return out;
}

Decomposition symmetric_decomposition(double g, double r, int sigma, int k, int S_max) {
  check_sector(sigma, k, "symmetric_decomposition");
  if (S_max < sigma) throw std::domain_error("symmetric_decomposition: S_max below sigma");
  if (!(r >= 0.0 && r <= 1.0))
    throw std::domain_error("symmetric_decomposition: reflectivity outside [0,1]");
  const auto& t = BsAmplitudeTable::get(sigma);
  Decomposition d;
  double total = 0.0;
  for (int S = sigma; S <= S_max; ++S) {
    DecompositionTerm term;
    term.S = S;
    term.chi = chi_weight(g, r, sigma, S);
    total += term.chi;
    const double scale = 1.0 / binom_d(S + 1, sigma + 1);
    FockDensityOperator rho(2, S);
    for (int n = 0; n <= S; ++n) {
      for (int m = 0; m <= S; ++m) {
        const int p_lo = std::max({0, n - sigma, m - sigma});
        const int p_hi = std::min({S - sigma, n, m});
        cplx val = 0.0;
        for (int p = p_lo; p <= p_hi; ++p) {
          const double w = std::sqrt(binom_d(n, p) * binom_d(m, p) *
                                     binom_d(S - n, S - sigma - p) *
                                     binom_d(S - m, S - sigma - p));
          val += w * t.amplitude(k, n - p) * std::conj(t.amplitude(k, m - p));
        }
        if (val != cplx{}) rho.add(make_occ({n, S - n}), make_occ({m, S - m}), scale * val);
      }
    }
    term.rho_int = std::move(rho);
    d.terms.push_back(std::move(term));
  }

  // missed weight beyond S_max
  double tail = 0.0;
  for (int dS = 1; dS <= 500; ++dS) {
    const double c = chi_weight(g, r, sigma, S_max + dS);
    tail += c;
    if (c < 1e-17 * (total + tail)) break;
  }
  d.truncated = total + tail > 0.0 && tail > 1e-10 * (total + tail);
  return d;
}

unsigned long long normalization_identity(int S, int sigma, int k) {
  check_sector(sigma, k, "normalization_identity");
  if (S < sigma) throw std::domain_error("normalization_identity: need S >= sigma");
  const auto& t = BsAmplitudeTable::get(sigma);
  long double sum = 0.0L;
  for (int n = 0; n <= S; ++n) {
    const int p_lo = std::max(0, n - sigma);
    const int p_hi = std::min(S - sigma, n);
    for (int p = p_lo; p <= p_hi; ++p)
      sum += static_cast<long double>(binom_d(n, p)) * binom_d(S - n, S - sigma - p) *
             t.phi(k, n - p) * t.phi(k, n - p);
  }
  const unsigned long long b = exact_binom(S + 1, sigma + 1);
  if (std::abs(static_cast<double>(sum) - static_cast<double>(b)) >
      1e-9 * static_cast<double>(b))
    throw invariant_error("normalization_identity: sum does not match binom(S+1, sigma+1)");
  return b;
}

FockDensityOperator epsilon_state(double g, double eps, int sigma, int k, int S_max) {
  check_sector(sigma, k, "epsilon_state");
  if (!(g > 0.0)) throw std::domain_error("epsilon_state: gain must be positive");
  if (!(eps > 0.0 && eps <= 1.0))
    throw std::domain_error("epsilon_state: relative transmittance outside (0,1]");
  if (S_max < sigma) throw std::domain_error("epsilon_state: S_max below sigma");

  const auto& t = BsAmplitudeTable::get(sigma);
  const double tau = std::tanh(g) * std::tanh(g);
  FockDensityOperator rho(2, S_max);
  for (int S = sigma; S <= S_max; ++S) {
    const int d = S - sigma;  // photons lost on the lossy idler
    const double wS = std::pow(tau * (1.0 - eps) / eps, double(d));
    if (wS == 0.0 && d > 0) break;
    for (int n = d; n <= S; ++n) {
      for (int m = d; m <= S; ++m) {
        const cplx val = wS * std::pow(eps, 0.5 * (n + m)) *
                         std::sqrt(binom_d(n, d) * binom_d(m, d)) *
                         t.amplitude(k, n - d) * std::conj(t.amplitude(k, m - d));
        rho.add(make_occ({n, S - n}), make_occ({m, S - m}), val);
      }
    }
  }
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw invariant_error("epsilon_state: vanishing trace");
  rho.scale(1.0 / tr);
  return rho;
}

double efficiency(double g, int S) {
  if (!(g > 0.0)) throw std::domain_error("efficiency: gain must be positive");
  if (S < 0) throw std::domain_error("efficiency: negative photon number");
  const double th = std::tanh(g), ch = std::cosh(g);
  return std::pow(th, 2.0 * S) / (ch * ch * ch * ch);
}

double vacuum_probability(double g, double r_a, double r_b) {
  if (!(g > 0.0)) throw std::domain_error("vacuum_probability: gain must be positive");
  for (double r : {r_a, r_b})
    if (!(r >= 0.0 && r <= 1.0))
      throw std::domain_error("vacuum_probability: reflectivity outside [0,1]");
  const double tau = std::tanh(g) * std::tanh(g);
  const double ch = std::cosh(g);
  return 1.0 / (ch * ch * ch * ch * (1.0 - r_a * tau) * (1.0 - r_b * tau));
}

double success_rate(double g, double r_a, double r_b, double f_rep) {
  if (!(f_rep >= 0.0)) throw std::domain_error("success_rate: negative repetition rate");
  return f_rep * (1.0 - vacuum_probability(g, r_a, r_b));
}

}  // namespace fockline
