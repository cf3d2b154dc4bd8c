#include "fockline/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fockline/kravchuk.hpp"

namespace fockline {

namespace {

void check_split(const FockDensityOperator& rho, const BipartiteSplit& split) {
  std::vector<bool> seen(rho.mode_count(), false);
  for (const auto* side : {&split.modes_a, &split.modes_b})
    for (int m : *side) {
      if (m < 0 || m >= rho.mode_count() || seen[m])
        throw std::domain_error("log_negativity: split is not a disjoint cover");
      seen[m] = true;
    }
  for (bool s : seen)
    if (!s) throw std::domain_error("log_negativity: split misses a mode");
}

}  // namespace

double log_negativity(const FockDensityOperator& rho, const BipartiteSplit& split) {
  check_split(rho, split);
  if (std::abs(rho.trace() - 1.0) > 1e-10)
    throw std::domain_error("log_negativity: operator must have unit trace");

  // partial transpose on the B modes
  std::map<EntryKey, cplx> pt;
  for (const auto& [key, v] : rho.entries()) {
    EntryKey k2 = key;
    for (int m : split.modes_b) std::swap(k2.bra[m], k2.ket[m]);
    pt[k2] = v;
  }
  double sum_abs = 0.0;
  for (double a : block_eigenvalues(pt)) sum_abs += std::abs(a);
  return std::max(0.0, std::log2(sum_abs));
}

double log_negativity_pure_closed(int S, int k) {
  const auto& t = BsAmplitudeTable::get(S);
  double sum = 0.0;
  for (int n = 0; n <= S; ++n) sum += std::abs(t.phi(k, n));
  return 2.0 * std::log2(sum);
}

double qfi_pure(int S, int k) {
  auto p = photon_distribution(S, k);
  double m1 = 0.0, m2 = 0.0;
  for (int n = 0; n <= S; ++n) {
    m1 += p[n] * n;
    m2 += p[n] * n * n;
  }
  return 4.0 * (m2 - m1 * m1);
}

EnReference en_reference(int S) {
  if (S < 0) throw std::domain_error("en_reference: negative S");
  return {std::log2(S + 1.0), 1.0};
}

double en_max_dimension_variant(int S) {
  return std::log2(2.0 * std::sqrt(S + 1.0) + 1.0);
}

}  // namespace fockline
