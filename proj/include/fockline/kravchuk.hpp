#pragma once

#include <vector>

#include "fockline/common.hpp"

namespace fockline {

/// Kravchuk polynomial k_k(n,S) in the convention pinned by the balanced
/// beam splitter: the amplitude table built from these values reproduces the
/// direct bosonic expansion <k,S-k|U_BS|n,S-n> with a† -> (a† - i b†)/sqrt(2).
/// Exact integer evaluation; defined for S <= 64 (larger orders go through
/// the amplitude table instead).
double kravchuk_poly(int k, int n, int S);

/// Symmetric Kravchuk function phi_k(n - S/2, S): the Kravchuk polynomial
/// normalized under the square root of the binomial weight. Orthonormal in n
/// for fixed S. Stays finite for S <= 1000.
double kravchuk_fn(int k, int n, int S);

/// Balanced-BS transition amplitudes for the S-photon sector,
/// A_S(k,n) = e^{i pi (n-k)/2} (-1)^{k+n} phi_k(n - S/2, S).
/// Rows are readouts k, columns input splits n; the table is unitary.
class BsAmplitudeTable {
 public:
  explicit BsAmplitudeTable(int S);

  int order() const { return S_; }
  double phi(int k, int n) const { return phi_[static_cast<size_t>(k) * (S_ + 1) + n]; }
  cplx amplitude(int k, int n) const;

  /// Cached shared table; thread-safe.
  static const BsAmplitudeTable& get(int S);

 private:
  int S_;
  std::vector<double> phi_;
};

cplx bs_amplitude(int S, int k, int n);

/// p^{(k,S)}(n) = |A_S(k,n)|^2; sums to one.
std::vector<double> photon_distribution(int S, int k);

/// Arcsine envelope f(n) = 4 / (pi S sqrt(1 - (2n/S - 1)^2)) of the k = S/2
/// distribution. Returns +infinity at the endpoints n = 0 and n = S.
double arcsine_envelope(int S, int n);

}  // namespace fockline
