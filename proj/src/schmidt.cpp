#include "fockline/schmidt.hpp"

#include <cmath>
#include <stdexcept>

namespace fockline {

double SchmidtSpectrum::tail_deficit() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return 1.0 - sum;
}

int schmidt_cutoff(double g, double tol) {
  if (!(g > 0.0)) throw std::domain_error("schmidt_cutoff: gain must be positive");
  if (!(tol > 0.0)) throw std::domain_error("schmidt_cutoff: tol must be positive");
  if (tol >= 1.0) return 1;  // documented boundary: smallest n >= 1
  // lambda_n / lambda_0 = tanh^{2n} g; solve in log space to avoid underflow.
  double log_ratio = 2.0 * std::log(std::tanh(g));
  int n = static_cast<int>(std::ceil(std::log(tol) / log_ratio));
  while (n > 1 && (n - 1) * log_ratio < std::log(tol)) --n;
  while (n * log_ratio >= std::log(tol)) ++n;
  return n;
}

SchmidtSpectrum schmidt_weights(double g, int n_max) {
  if (!(g > 0.0)) throw std::domain_error("schmidt_weights: gain must be positive");
  if (n_max < 0) throw std::domain_error("schmidt_weights: negative cutoff");
  SchmidtSpectrum s;
  s.g = g;
  s.n_max = n_max;
  s.weights.resize(n_max + 1);
  const double ratio = std::tanh(g) * std::tanh(g);
  double w = 1.0 / (std::cosh(g) * std::cosh(g));
  for (int n = 0; n <= n_max; ++n) {
    s.weights[n] = w;
    w *= ratio;
  }
  return s;
}

}  // namespace fockline
