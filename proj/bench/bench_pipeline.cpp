// Timing comparison of the fused OpenMP pipeline against the serial ancilla
// reference, and of the loss kernel under one worker versus all of them.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "fockline/channels.hpp"
#include "fockline/protocol.hpp"
#include "fockline/schmidt.hpp"

using namespace fockline;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

}  // namespace

int main() {
  PipelineConfig cfg;
  cfg.g = 0.3;
  cfg.n_max = 5;
  cfg.losses = {0.3, 0.25, 0.1, 0.1, 0.2, 0.2};
  cfg.sigma_max = 6;

  std::printf("pipeline: g = %g, n_max = %d, all readouts up to sigma = %d\n", cfg.g,
              cfg.n_max, cfg.sigma_max);

  auto t0 = clk::now();
  auto fused = simulate_pipeline(cfg);
  const double t_fused = ms_since(t0);

  setenv("FOCKLINE_THREADS", "1", 1);
  t0 = clk::now();
  auto fused1 = simulate_pipeline(cfg);
  const double t_fused1 = ms_since(t0);

  t0 = clk::now();
  auto reference = ref::simulate_pipeline(cfg);
  const double t_ref = ms_since(t0);
  setenv("FOCKLINE_THREADS", "0", 1);

  double max_dp = 0.0, max_de = 0.0;
  for (size_t i = 0; i < fused.size(); ++i) {
    max_dp = std::max(max_dp, std::abs(fused[i].probability - reference[i].probability));
    if (fused[i].e_n_defined && reference[i].e_n_defined)
      max_de = std::max(max_de, std::abs(fused[i].e_n - reference[i].e_n));
  }
  std::printf("fused, all workers : %10.2f ms\n", t_fused);
  std::printf("fused, one worker  : %10.2f ms\n", t_fused1);
  std::printf("serial reference   : %10.2f ms   (speedup %.1fx over fused)\n", t_ref,
              t_ref / t_fused);
  std::printf("max |dp| = %.3g, max |dE_N| = %.3g across %zu readouts\n", max_dp, max_de,
              fused.size());

  // loss kernel on a broad state
  auto rho = sv_pure_state(schmidt_weights(1.0, 24));
  setenv("FOCKLINE_THREADS", "1", 1);
  t0 = clk::now();
  auto serial = loss_channel(rho, 1, 0.35);
  const double t_serial = ms_since(t0);
  setenv("FOCKLINE_THREADS", "0", 1);
  t0 = clk::now();
  auto parallel = loss_channel(rho, 1, 0.35);
  const double t_par = ms_since(t0);

  double max_d = 0.0;
  for (const auto& [key, v] : serial.entries())
    max_d = std::max(max_d, std::abs(v - parallel.entry(key.bra, key.ket)));
  std::printf("loss kernel, one worker  : %10.2f ms\n", t_serial);
  std::printf("loss kernel, all workers : %10.2f ms   (speedup %.1fx, max diff %.3g)\n",
              t_par, t_serial / t_par, max_d);
  return 0;
}
