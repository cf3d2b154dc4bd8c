#pragma once

#include <vector>

namespace fockline {

/// Truncated Schmidt weights lambda_n = tanh^{2n}(g)/cosh^2(g) of a two-mode
/// squeezed vacuum. Consecutive weights form a geometric progression of
/// ratio tanh^2(g); the truncation deficit 1 - sum(weights) is recorded.
struct SchmidtSpectrum {
  double g = 0.0;
  int n_max = 0;
  std::vector<double> weights;

  double tail_deficit() const;
};

/// Smallest n with lambda_n/lambda_0 < tol. For tol >= 1 the boundary is
/// resolved as 1 (smallest n >= 1 with a strict inequality).
int schmidt_cutoff(double g, double tol);

SchmidtSpectrum schmidt_weights(double g, int n_max);

}  // namespace fockline
