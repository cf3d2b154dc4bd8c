#include "fockline/fock.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace fockline {

Occ make_occ(std::initializer_list<int> ns) {
  Occ o{};
  int i = 0;
  for (int n : ns) {
    if (i >= kMaxModes) throw std::domain_error("make_occ: too many modes");
    o[i++] = static_cast<std::uint16_t>(n);
  }
  return o;
}

int occ_sum(const Occ& o, int mode_count) {
  int s = 0;
  for (int i = 0; i < mode_count; ++i) s += o[i];
  return s;
}

FockDensityOperator::FockDensityOperator(int mode_count, int n_max, int total_max)
    : mode_count_(mode_count),
      n_max_(n_max),
      total_max_(total_max >= 0 ? total_max : mode_count * n_max) {
  if (mode_count < 0 || mode_count > kMaxModes)
    throw std::domain_error("FockDensityOperator: unsupported mode count");
}

bool FockDensityOperator::in_bounds(const Occ& o) const {
  int sum = 0;
  for (int i = 0; i < mode_count_; ++i) {
    if (o[i] > n_max_) return false;
    sum += o[i];
  }
  return sum <= total_max_;
}

void FockDensityOperator::add(const Occ& bra, const Occ& ket, cplx v) {
  if (v == cplx{} || !in_bounds(bra) || !in_bounds(ket)) return;
  entries_[{bra, ket}] += v;
}

cplx FockDensityOperator::entry(const Occ& bra, const Occ& ket) const {
  auto it = entries_.find({bra, ket});
  return it == entries_.end() ? cplx{} : it->second;
}

double FockDensityOperator::trace() const {
  double t = 0.0;
  for (const auto& [key, v] : entries_)
    if (key.bra == key.ket) t += v.real();
  return t;
}

void FockDensityOperator::scale(double s) {
  for (auto& [key, v] : entries_) v *= s;
}

double FockDensityOperator::hermiticity_defect() const {
  double d = 0.0;
  for (const auto& [key, v] : entries_) {
    auto it = entries_.find({key.ket, key.bra});
    cplx mirror = it == entries_.end() ? cplx{} : it->second;
    d = std::max(d, std::abs(v - std::conj(mirror)));
  }
  return d;
}

double FockDensityOperator::min_eigenvalue() const {
  auto evs = block_eigenvalues(entries_);
  return evs.empty() ? 0.0 : *std::min_element(evs.begin(), evs.end());
}

double FockDensityOperator::mean_photons(int mode) const {
  double m = 0.0;
  for (const auto& [key, v] : entries_)
    if (key.bra == key.ket) m += key.ket[mode] * v.real();
  return m;
}

FockDensityOperator sv_pure_state(const SchmidtSpectrum& spectrum) {
  FockDensityOperator rho(2, spectrum.n_max);
  std::vector<double> amp(spectrum.weights.size());
  for (size_t n = 0; n < amp.size(); ++n) amp[n] = std::sqrt(spectrum.weights[n]);
  for (int n = 0; n <= spectrum.n_max; ++n)
    for (int m = 0; m <= spectrum.n_max; ++m)
      rho.add(make_occ({n, n}), make_occ({m, m}), amp[n] * amp[m]);
  return rho;
}

FockDensityOperator tensor(const FockDensityOperator& a, const FockDensityOperator& b) {
  if (a.mode_count() + b.mode_count() > kMaxModes)
    throw std::domain_error("tensor: too many modes");
  FockDensityOperator out(a.mode_count() + b.mode_count(),
                          std::max(a.n_max(), b.n_max()),
                          a.total_max() + b.total_max());
  for (const auto& [ka, va] : a.entries()) {
    for (const auto& [kb, vb] : b.entries()) {
      Occ bra = ka.bra, ket = ka.ket;
      for (int i = 0; i < b.mode_count(); ++i) {
        bra[a.mode_count() + i] = kb.bra[i];
        ket[a.mode_count() + i] = kb.ket[i];
      }
      out.add(bra, ket, va * vb);
    }
  }
  return out;
}

FockDensityOperator partial_trace(const FockDensityOperator& rho,
                                  const std::vector<int>& modes_to_drop) {
  std::vector<bool> drop(rho.mode_count(), false);
  for (int m : modes_to_drop) {
    if (m < 0 || m >= rho.mode_count())
      throw std::domain_error("partial_trace: mode out of range");
    drop[m] = true;
  }
  int kept = rho.mode_count() - static_cast<int>(modes_to_drop.size());
  FockDensityOperator out(kept, rho.n_max(), rho.total_max());
  for (const auto& [key, v] : rho.entries()) {
    bool diagonal = true;
    for (int m = 0; m < rho.mode_count() && diagonal; ++m)
      if (drop[m] && key.bra[m] != key.ket[m]) diagonal = false;
    if (!diagonal) continue;
    Occ bra{}, ket{};
    int j = 0;
    for (int m = 0; m < rho.mode_count(); ++m) {
      if (drop[m]) continue;
      bra[j] = key.bra[m];
      ket[j] = key.ket[m];
      ++j;
    }
    out.add(bra, ket, v);
  }
  return out;
}

ProjectionResult project_and_renormalize(const FockDensityOperator& rho,
                                         const FockProjector& projector) {
  if (projector.mode_indices.size() != projector.occupations.size())
    throw std::domain_error("project_and_renormalize: malformed projector");
  for (int m : projector.mode_indices)
    if (m < 0 || m >= rho.mode_count())
      throw std::domain_error("project_and_renormalize: mode out of range");

  double total = rho.trace();
  FockDensityOperator picked(rho.mode_count(), rho.n_max(), rho.total_max());
  for (const auto& [key, v] : rho.entries()) {
    bool match = true;
    for (size_t i = 0; i < projector.mode_indices.size() && match; ++i) {
      int m = projector.mode_indices[i];
      int n = projector.occupations[i];
      if (key.bra[m] != n || key.ket[m] != n) match = false;
    }
    if (match) picked.add(key.bra, key.ket, v);
  }
  ProjectionResult res;
  res.probability = total > 0.0 ? picked.trace() / total : 0.0;
  if (res.probability <= 0.0) {
    res.probability = 0.0;
    res.empty = true;
    res.state = FockDensityOperator(rho.mode_count(), rho.n_max(), rho.total_max());
    return res;
  }
  picked.scale(1.0 / picked.trace());
  res.state = std::move(picked);
  return res;
}

std::vector<double> block_eigenvalues(const std::map<EntryKey, cplx>& entries) {
  // union-find over the basis tuples that appear
  std::map<Occ, int> index;
  std::vector<Occ> basis;
  auto idx_of = [&](const Occ& o) {
    auto [it, inserted] = index.try_emplace(o, static_cast<int>(basis.size()));
    if (inserted) basis.push_back(o);
    return it->second;
  };
  std::vector<int> parent;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [key, v] : entries) {
    int a = idx_of(key.bra), b = idx_of(key.ket);
    while (static_cast<int>(parent.size()) < static_cast<int>(basis.size()))
      parent.push_back(static_cast<int>(parent.size()));
    parent[find(a)] = find(b);
  }
  std::map<int, std::vector<int>> blocks;
  for (int i = 0; i < static_cast<int>(basis.size()); ++i) blocks[find(i)].push_back(i);
  std::vector<int> local(basis.size(), 0), block_id(basis.size(), 0);
  std::vector<const std::vector<int>*> block_list;
  for (const auto& [root, members] : blocks) {
    for (size_t i = 0; i < members.size(); ++i) {
      local[members[i]] = static_cast<int>(i);
      block_id[members[i]] = static_cast<int>(block_list.size());
    }
    block_list.push_back(&members);
  }
  std::vector<Eigen::MatrixXcd> mats;
  mats.reserve(block_list.size());
  for (const auto* members : block_list)
    mats.emplace_back(Eigen::MatrixXcd::Zero(members->size(), members->size()));
  for (const auto& [key, v] : entries) {
    int b = index[key.bra], k = index[key.ket];
    mats[block_id[b]](local[b], local[k]) = v;
  }

  std::vector<double> evs;
  for (auto& M : mats) {
    // counter floating asymmetry before the Hermitian solve
    Eigen::MatrixXcd H = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
      evs.push_back(solver.eigenvalues()[i]);
  }
  return evs;
}

}  // namespace fockline
