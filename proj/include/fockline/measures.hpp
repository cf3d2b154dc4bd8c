#pragma once

#include <vector>

#include "fockline/fock.hpp"

namespace fockline {

/// Bipartition of the operator's modes; the two lists must be disjoint and
/// cover every mode.
struct BipartiteSplit {
  std::vector<int> modes_a;
  std::vector<int> modes_b;
};

/// Logarithmic negativity E_N = log2 ||rho^Gamma||_1 from partial-transpose
/// eigenvalues, computed block-wise. Requires trace(rho) = 1.
double log_negativity(const FockDensityOperator& rho, const BipartiteSplit& split);

/// Closed form for the lossless conditional output state:
/// E_N = 2 log2 sum_n |phi_k(n - S/2, S)|. Gain-independent.
double log_negativity_pure_closed(int S, int k);

/// Quantum Fisher information of the pure conditional state:
/// 4 [ sum p n^2 - (sum p n)^2 ] under p^{(k,S)}.
double qfi_pure(int S, int k);

struct EnReference {
  double en_max;   // log2(S+1), maximally entangled state in H^(S+1)
  double en_bell;  // 1, the two-photon Bell pair
};
EnReference en_reference(int S);

/// Alternative maximal-entanglement constant printed in the unsymmetric-loss
/// analysis, log2(2 sqrt(S+1) + 1). Kept as a labeled variant; en_reference
/// carries the log2(S+1) value used everywhere else.
double en_max_dimension_variant(int S);

}  // namespace fockline
