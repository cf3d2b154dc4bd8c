#include "fockline/kravchuk.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace fockline {

namespace {

constexpr int kExactMax = 64;  // binomials stay exact in 128-bit integers

void check_range(int k, int n, int S, const char* who) {
  if (S < 0 || k < 0 || k > S || n < 0 || n > S)
    throw std::domain_error(std::string(who) + ": indices out of range");
}

// Pascal triangle up to kExactMax, exact.
unsigned long long binom_u64(int n, int k) {
  static const auto table = [] {
    std::array<std::array<unsigned long long, kExactMax + 1>, kExactMax + 1> t{};
    for (int i = 0; i <= kExactMax; ++i) {
      t[i][0] = 1;
      for (int j = 1; j <= i; ++j)
        t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0);
    }
    return t;
  }();
  if (k < 0 || k > n) return 0;
  return table[n][k];
}

// sum_j (-1)^j binom(n,j) binom(S-n,k-j), exact.
__int128 kravchuk_sum(int k, int n, int S) {
  __int128 acc = 0;
  for (int j = std::max(0, k - (S - n)); j <= std::min(n, k); ++j) {
    __int128 term = static_cast<__int128>(binom_u64(n, j)) * binom_u64(S - n, k - j);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

double phi_exact(int k, int n, int S) {
  long double lg = 0.5L * (std::lgammal(k + 1.0L) + std::lgammal(S - k + 1.0L) -
                           std::lgammal(n + 1.0L) - std::lgammal(S - n + 1.0L)) -
                   0.5L * S * std::log(2.0L);
  long double poly = static_cast<long double>(kravchuk_sum(k, n, S));
  long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
  return static_cast<double>(sign * poly * expl(lg));
}

// Large orders: phi_k(n) are the orthonormal eigenvectors of the tridiagonal
// operator with couplings sqrt((n+1)(S-n))/2, eigenvalue k - S/2 ascending.
// Row signs are pinned by the degree recurrence
//   (n - S/2) phi_k(n) = b_{k+1} phi_{k+1}(n) + b_k phi_{k-1}(n),
// b_k = sqrt(k (S-k+1))/2, anchored at the positive ground row.
std::vector<double> phi_by_eigensolver(int S) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(S + 1);
  Eigen::VectorXd sub(S);
  for (int n = 0; n < S; ++n) sub[n] = std::sqrt(double(n + 1) * double(S - n)) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  std::vector<double> phi(static_cast<size_t>(S + 1) * (S + 1));
  auto at = [&](int k, int n) -> double& { return phi[static_cast<size_t>(k) * (S + 1) + n]; };
  for (int k = 0; k <= S; ++k)
    for (int n = 0; n <= S; ++n)
      at(k, n) = (n % 2 == 0 ? 1.0 : -1.0) * solver.eigenvectors()(n, k);

  // ground row has no sign change; make it positive at its peak
  int peak = 0;
  for (int n = 0; n <= S; ++n)
    if (std::abs(at(0, n)) > std::abs(at(0, peak))) peak = n;
  if (at(0, peak) < 0)
    for (int n = 0; n <= S; ++n) at(0, n) = -at(0, n);

  auto beta = [&](int k) { return std::sqrt(double(k) * double(S - k + 1)) / 2.0; };
  for (int k = 0; k < S; ++k) {
    peak = 0;
    for (int n = 0; n <= S; ++n)
      if (std::abs(at(k + 1, n)) > std::abs(at(k + 1, peak))) peak = n;
    double expect = (peak - 0.5 * S) * at(k, peak) - (k > 0 ? beta(k) * at(k - 1, peak) : 0.0);
    if (expect * at(k + 1, peak) < 0)
      for (int n = 0; n <= S; ++n) at(k + 1, n) = -at(k + 1, n);
  }
  return phi;
}

}  // namespace

double kravchuk_poly(int k, int n, int S) {
  check_range(k, n, S, "kravchuk_poly");
  if (S > kExactMax)
    throw std::domain_error("kravchuk_poly: order above exact-integer range");
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * static_cast<double>(kravchuk_sum(k, n, S));
}

double kravchuk_fn(int k, int n, int S) {
  check_range(k, n, S, "kravchuk_fn");
  if (S <= kExactMax) return phi_exact(k, n, S);
  return BsAmplitudeTable::get(S).phi(k, n);
}

BsAmplitudeTable::BsAmplitudeTable(int S) : S_(S) {
  if (S < 0) throw std::domain_error("BsAmplitudeTable: negative order");
  if (S <= kExactMax) {
    phi_.resize(static_cast<size_t>(S + 1) * (S + 1));
    for (int k = 0; k <= S; ++k)
      for (int n = 0; n <= S; ++n)
        phi_[static_cast<size_t>(k) * (S + 1) + n] = phi_exact(k, n, S);
  } else {
    phi_ = phi_by_eigensolver(S);
  }
}

cplx BsAmplitudeTable::amplitude(int k, int n) const {
  static const cplx phase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // i^m
  return phase[(3 * n + k) % 4] * phi(k, n);
}

const BsAmplitudeTable& BsAmplitudeTable::get(int S) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<BsAmplitudeTable>> cache;
  std::scoped_lock lock(mu);
  auto& slot = cache[S];
  if (!slot) slot = std::make_unique<BsAmplitudeTable>(S);
  return *slot;
}

cplx bs_amplitude(int S, int k, int n) {
  check_range(k, n, S, "bs_amplitude");
  return BsAmplitudeTable::get(S).amplitude(k, n);
}

std::vector<double> photon_distribution(int S, int k) {
  check_range(k, 0, S, "photon_distribution");
  const auto& t = BsAmplitudeTable::get(S);
  std::vector<double> p(S + 1);
  for (int n = 0; n <= S; ++n) p[n] = t.phi(k, n) * t.phi(k, n);
  return p;
}

double arcsine_envelope(int S, int n) {
  if (S <= 0) throw std::domain_error("arcsine_envelope: order must be positive");
  if (n <= 0 || n >= S) return std::numeric_limits<double>::infinity();
  double x = 2.0 * n / S - 1.0;
  return 4.0 / (M_PI * S * std::sqrt(1.0 - x * x));
}

}  // namespace fockline
