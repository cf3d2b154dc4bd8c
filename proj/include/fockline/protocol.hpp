#pragma once

#include <optional>
#include <vector>

#include "fockline/channels.hpp"
#include "fockline/measures.hpp"

namespace fockline {

struct Readout {
  int k = 0;      // photons at detector d_1
  int sigma = 0;  // total detected photons; d_2 sees sigma - k
};

struct PipelineConfig {
  double g = 0.1;
  int n_max = -1;            // derived from cutoff_tol when negative
  double cutoff_tol = 1e-15;
  LossConfig losses;
  std::optional<Readout> readout;  // unset = every readout with sigma <= sigma_max
  int sigma_max = -1;              // default 2 * n_max
  LossBackend loss_backend = LossBackend::kernel;
  bool parallel = true;
};

enum class ResultSource {
  simulated,
  closed_form_lossless,
  closed_form_symmetric,
  closed_form_epsilon,
};

const char* to_string(ResultSource s);

/// One Bell-measurement readout (k, sigma-k): its per-pulse click
/// probability, the renormalized conditional state on (a_1, b_1), and its
/// logarithmic negativity. Zero-probability readouts carry e_n_defined=false.
struct ConditionalResult {
  int k = 0;
  int sigma = 0;
  double probability = 0.0;
  FockDensityOperator state;
  double e_n = 0.0;
  bool e_n_defined = false;
  ResultSource source = ResultSource::simulated;
};

/// |Psi_out^{(k,S)}> = sum_n A_S(k,n) |n, S-n> as a pure two-mode operator.
FockDensityOperator lossless_output_state(int S, int k);

/// Full pipeline: squeezed vacua -> signal/idler losses -> balanced BS on the
/// idlers -> detector losses -> photon-number projection, one result per
/// requested readout, in (sigma, k) order.
std::vector<ConditionalResult> simulate_pipeline(const PipelineConfig& config);

namespace ref {
/// Serial reference pipeline: losses materialized as ancilla beam splitters,
/// the full density operator carried through balanced_bs and projected with
/// FockProjector. Slow; kept as the oracle for the fused production path and
/// as the baseline of the benchmark target.
std::vector<ConditionalResult> simulate_pipeline(const PipelineConfig& config);
}  // namespace ref

/// chi_{sigma,S} = r^{S-sigma} lambda_S binom(S+1, sigma+1).
double chi_weight(double g, double r, int sigma, int S);

struct DecompositionTerm {
  int S = 0;
  double chi = 0.0;
  FockDensityOperator rho_int;  // unit trace; S = sigma term is the lossless state
};

struct Decomposition {
  std::vector<DecompositionTerm> terms;
  bool truncated = false;  // S_max missed more than 1e-10 of the total weight

  /// Normalized sum chi * rho_int over the terms.
  FockDensityOperator combined() const;
};

/// Symmetric-idler-loss decomposition of the conditional state into
/// lossless-structure blocks of S photons, S = sigma..S_max.
Decomposition symmetric_decomposition(double g, double r, int sigma, int k, int S_max);

/// Evaluates the double sum behind 1/N_int^2 and asserts it equals
/// binom(S+1, sigma+1); returns that binomial. Mismatch throws.
unsigned long long normalization_identity(int S, int sigma, int k);

/// Conditional state for one lossy idler of relative transmittance
/// epsilon = t_a/t_b with t_b = 1; epsilon = 1 reproduces the lossless state.
FockDensityOperator epsilon_state(double g, double eps, int sigma, int k, int S_max);

/// Per-pulse probability of any fixed readout (k, S-k): lambda_S / cosh^2 g.
double efficiency(double g, int S);

/// p_{sigma=0} = cosh^-4 g / ((1 - r_a tanh^2 g)(1 - r_b tanh^2 g)).
double vacuum_probability(double g, double r_a, double r_b);

/// f_rep * (1 - p_{sigma=0}).
double success_rate(double g, double r_a, double r_b, double f_rep);

}  // namespace fockline
