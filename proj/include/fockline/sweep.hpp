#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fockline/protocol.hpp"

namespace fockline {

struct SweepPoint {
  double r_a2 = 0.0, r_b2 = 0.0, r_s = 0.0, r_d = 0.0;
};

enum class SweepMode { full_sim, closed_form };

struct SweepSpec {
  double g = 0.1;
  int sigma = 4;
  std::vector<int> k_set;
  std::vector<SweepPoint> grid;
  SweepMode mode = SweepMode::full_sim;
  int n_max = -1;  // derived from the gain when negative
};

struct SweepRow {
  double g;
  int sigma, k;
  double r_a2, r_b2, r_s, r_d;
  double probability;
  double e_n;
  std::string source;
};

/// One row per (grid point, k), deterministic order. closed_form mode covers
/// lossless-signal/detector points with symmetric idlers (decomposition) or
/// one lossless idler (epsilon route); other points are rejected by index.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

struct FluctuationSpec {
  double mean_attenuation_db = 80.0;
  double spread_db = 1.0;  // standard deviation of the attenuation in dB
  int samples = 500;
  std::uint64_t seed = 1;
  double t_b2 = -1.0;  // fixed Bob transmittance; default 10^{-mean/10}
  bool both = false;   // draw Bob's channel independently as well
  double g = 0.1;
  int sigma = 4;
  std::vector<int> k_set = {0, 1, 2};
};

struct FluctuationSummary {
  int k = 0;
  double baseline = 0.0;  // no-fluctuation value
  double mean = 0.0, min = 0.0, max = 0.0;
  std::vector<double> values;  // per sample, in sample order
};

std::vector<FluctuationSummary> fluctuation_mc(const FluctuationSpec& spec);

/// CSV with a header row, 12 significant digits, LF endings.
void emit_table(const std::vector<SweepRow>& rows, const std::string& path);

std::string format_row(const SweepRow& row);
extern const char* const kSweepHeader;

}  // namespace fockline
