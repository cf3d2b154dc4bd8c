#include "fockline/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "fockline/common.hpp"
#include "fockline/kravchuk.hpp"
#include "fockline/rng.hpp"
#include "fockline/schmidt.hpp"

namespace fockline {

namespace {

// Click probability of the readout (k, sigma-k) with idler reflectivities
// r_a, r_b; independent of signal loss, valid for lossless detectors.
// Summing the binomial loss ladders sector by sector collapses them into
// geometric factors 1/(1 - r tanh^2 g) per surviving idler photon.
double readout_probability(double g, int sigma, int k, double r_a, double r_b) {
  const double tau = std::tanh(g) * std::tanh(g);
  const double ch2 = std::cosh(g) * std::cosh(g);
  const auto& t = BsAmplitudeTable::get(sigma);
  double sum = 0.0;
  for (int n = 0; n <= sigma; ++n) {
    const double phi2 = t.phi(k, n) * t.phi(k, n);
    sum += phi2 * std::pow(1.0 - r_a, n) * std::pow(1.0 - r_b, sigma - n) *
           std::pow(1.0 - r_a * tau, -(n + 1.0)) * std::pow(1.0 - r_b * tau, -(sigma - n + 1.0));
  }
  return std::pow(tau, sigma) / (ch2 * ch2) * sum;
}

// Smallest S_max whose missed sector weight ratio^d binom(sigma+1+d, sigma+1)
// is negligible against the retained total.
int tail_cutoff(int sigma, double ratio) {
  if (!(ratio > 0.0)) return sigma;
  double term = 1.0, total = 1.0;
  int d = 0;
  while (d < 400) {
    ++d;
    term *= ratio * (sigma + 1 + d) / double(d);
    total += term;
    if (term < 1e-14 * total) break;
  }
  return sigma + d;
}

double closed_form_e_n(double g, int sigma, int k, double r_a, double r_b,
                       std::string& source) {
  const double tau = std::tanh(g) * std::tanh(g);
  if (r_a == r_b) {
    if (r_a == 0.0) {
      source = to_string(ResultSource::closed_form_lossless);
      return log_negativity_pure_closed(sigma, k);
    }
    source = to_string(ResultSource::closed_form_symmetric);
    auto d = symmetric_decomposition(g, r_a, sigma, k, tail_cutoff(sigma, r_a * tau));
    return log_negativity(d.combined(), {{0}, {1}});
  }
  // one idler lossless: only the relative transmittance matters, and swapping
  // the arms maps the readout k to sigma - k
  double eps = (1.0 - r_a) / (1.0 - r_b);
  int k_eff = k;
  if (eps > 1.0) {
    eps = 1.0 / eps;
    k_eff = sigma - k;
  }
  source = to_string(ResultSource::closed_form_epsilon);
  auto rho = epsilon_state(g, eps, sigma, k_eff,
                           tail_cutoff(sigma, tau * (1.0 - eps) / eps));
  return log_negativity(rho, {{0}, {1}});
}

}  // namespace

const char* const kSweepHeader = "g,sigma,k,r_a2,r_b2,r_s,r_d,probability,e_n,source";

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (!(spec.g > 0.0)) throw std::domain_error("run_sweep: gain must be positive");
  if (spec.sigma < 0) throw std::domain_error("run_sweep: negative sigma");
  for (int k : spec.k_set)
    if (k < 0 || k > spec.sigma)
      throw std::domain_error("run_sweep: readout k outside 0..sigma");
  const int n_max = spec.n_max >= 0 ? spec.n_max : schmidt_cutoff(spec.g, 1e-15);

  std::vector<SweepRow> rows;
  rows.reserve(spec.grid.size() * spec.k_set.size());
  for (size_t i = 0; i < spec.grid.size(); ++i) {
    const SweepPoint& pt = spec.grid[i];
    for (double r : {pt.r_a2, pt.r_b2, pt.r_s, pt.r_d})
      if (!(r >= 0.0 && r <= 1.0))
        throw std::domain_error("run_sweep: grid point " + std::to_string(i) +
                                ": reflectivity outside [0,1]");
    if (spec.mode == SweepMode::closed_form) {
      const bool covered = pt.r_s == 0.0 && pt.r_d == 0.0 &&
                           (pt.r_a2 == pt.r_b2 || std::min(pt.r_a2, pt.r_b2) == 0.0) &&
                           std::max(pt.r_a2, pt.r_b2) < 1.0;
      if (!covered)
        throw std::domain_error(
            "run_sweep: grid point " + std::to_string(i) +
            " outside closed-form coverage (needs lossless signal and detectors "
            "and symmetric or one-sided idler loss below total)");
    }

    for (int k : spec.k_set) {
      SweepRow row;
      row.g = spec.g;
      row.sigma = spec.sigma;
      row.k = k;
      row.r_a2 = pt.r_a2;
      row.r_b2 = pt.r_b2;
      row.r_s = pt.r_s;
      row.r_d = pt.r_d;
      if (spec.mode == SweepMode::full_sim) {
        PipelineConfig cfg;
        cfg.g = spec.g;
        cfg.n_max = n_max;
        cfg.sigma_max = spec.sigma;
        cfg.readout = Readout{k, spec.sigma};
        cfg.losses = {pt.r_a2, pt.r_b2, pt.r_s, pt.r_s, pt.r_d, pt.r_d};
        auto res = simulate_pipeline(cfg).at(0);
        row.probability = res.probability;
        row.e_n = res.e_n_defined ? res.e_n : std::numeric_limits<double>::quiet_NaN();
        row.source = to_string(res.source);
      } else {
        row.probability = readout_probability(spec.g, spec.sigma, k, pt.r_a2, pt.r_b2);
        row.e_n = closed_form_e_n(spec.g, spec.sigma, k, pt.r_a2, pt.r_b2, row.source);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<FluctuationSummary> fluctuation_mc(const FluctuationSpec& spec) {
  if (!(spec.g > 0.0)) throw std::domain_error("fluctuation_mc: gain must be positive");
  if (!(spec.mean_attenuation_db >= 0.0))
    throw std::domain_error("fluctuation_mc: negative mean attenuation");
  if (!(spec.spread_db >= 0.0)) throw std::domain_error("fluctuation_mc: negative spread");
  if (spec.samples <= 0) throw std::domain_error("fluctuation_mc: need samples > 0");
  if (spec.sigma < 0) throw std::domain_error("fluctuation_mc: negative sigma");
  for (int k : spec.k_set)
    if (k < 0 || k > spec.sigma)
      throw std::domain_error("fluctuation_mc: readout k outside 0..sigma");

  const double t_mean = std::pow(10.0, -spec.mean_attenuation_db / 10.0);
  const double t_fix = spec.t_b2 > 0.0 ? spec.t_b2 : t_mean;
  const double tau = std::tanh(spec.g) * std::tanh(spec.g);

  auto en_of = [&](double eps, int k) {
    int k_eff = k;
    if (eps > 1.0) {
      eps = 1.0 / eps;
      k_eff = spec.sigma - k;
    }
    auto rho = epsilon_state(spec.g, eps, spec.sigma, k_eff,
                             tail_cutoff(spec.sigma, tau * (1.0 - eps) / eps));
    return log_negativity(rho, {{0}, {1}});
  };

  std::vector<FluctuationSummary> out(spec.k_set.size());
  for (size_t ki = 0; ki < spec.k_set.size(); ++ki) {
    out[ki].k = spec.k_set[ki];
    out[ki].baseline = en_of(t_mean / t_fix, spec.k_set[ki]);
    out[ki].values.resize(spec.samples);
  }

  const int threads = worker_count();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int i = 0; i < spec.samples; ++i) {
    const double db_a =
        spec.mean_attenuation_db + spec.spread_db * normal_sample(spec.seed, 2 * i);
    const double t_a = std::pow(10.0, -db_a / 10.0);
    double t_b = t_fix;
    if (spec.both) {
      const double db_b =
          spec.mean_attenuation_db + spec.spread_db * normal_sample(spec.seed, 2 * i + 1);
      t_b = std::pow(10.0, -db_b / 10.0);
    }
    for (size_t ki = 0; ki < spec.k_set.size(); ++ki)
      out[ki].values[i] = en_of(t_a / t_b, spec.k_set[ki]);
  }

  for (auto& s : out) {
    s.min = *std::min_element(s.values.begin(), s.values.end());
    s.max = *std::max_element(s.values.begin(), s.values.end());
    double acc = 0.0;
    for (double v : s.values) acc += v;
    s.mean = acc / s.values.size();
  }
  return out;
}

std::string format_row(const SweepRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.12g,%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%s",
                row.g, row.sigma, row.k, row.r_a2, row.r_b2, row.r_s, row.r_d,
                row.probability, row.e_n, row.source.c_str());
  return buf;
}

void emit_table(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_table: cannot open " + path);
  out << kSweepHeader << '\n';
  for (const auto& row : rows) out << format_row(row) << '\n';
  if (!out) throw std::runtime_error("emit_table: write failed for " + path);
}

}  // namespace fockline
