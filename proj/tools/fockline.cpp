#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fockline/channels.hpp"
#include "fockline/common.hpp"
#include "fockline/measures.hpp"
#include "fockline/protocol.hpp"
#include "fockline/schmidt.hpp"
#include "fockline/sweep.hpp"

namespace {

std::vector<double> split_csv(const std::string& s, size_t expect, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.size() != expect)
    throw CLI::ValidationError(std::string(what) + ": expected " +
                               std::to_string(expect) + " comma-separated values");
  return out;
}

int run_ideal(int S) {
  auto ref = fockline::en_reference(S);
  std::printf("# S = %d, e_n_max = %.12g, e_n_bell = %g\n", S, ref.en_max, ref.en_bell);
  std::printf("k,e_n,qfi\n");
  for (int k = 0; k <= S; ++k)
    std::printf("%d,%.12g,%.12g\n", k, fockline::log_negativity_pure_closed(S, k),
                fockline::qfi_pure(S, k));
  return 0;
}

int run_sweep_cmd(const fockline::SweepSpec& spec, const std::string& out_path) {
  auto rows = fockline::run_sweep(spec);
  if (out_path.empty()) {
    std::printf("%s\n", fockline::kSweepHeader);
    for (const auto& row : rows) std::printf("%s\n", fockline::format_row(row).c_str());
  } else {
    fockline::emit_table(rows, out_path);
    std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), out_path.c_str());
  }
  return 0;
}

int run_decompose(double g, double r, int sigma, int k, int s_max) {
  auto d = fockline::symmetric_decomposition(g, r, sigma, k, s_max);
  std::printf("# g = %g, r = %g, readout (%d, %d), S up to %d%s\n", g, r, k, sigma - k,
              s_max, d.truncated ? ", TRUNCATED" : "");
  std::printf("S,chi,chi_normalized\n");
  double total = 0.0;
  for (const auto& term : d.terms) total += term.chi;
  for (const auto& term : d.terms)
    std::printf("%d,%.12g,%.12g\n", term.S, term.chi, term.chi / total);
  auto rho = d.combined();
  std::printf("e_n = %.12g\n", fockline::log_negativity(rho, {{0}, {1}}));
  return 0;
}

int run_rates(double g, double db, double f_rep) {
  const double r = fockline::db_to_reflectivity(db);
  const double p_vac = fockline::vacuum_probability(g, r, r);
  std::printf("attenuation        = %g dB (r = %.12g)\n", db, r);
  std::printf("p(no click)        = %.12g\n", p_vac);
  std::printf("p(any click)       = %.6g per pulse\n", 1.0 - p_vac);
  std::printf("success rate       = %.6g Hz at f_rep = %.6g Hz\n",
              fockline::success_rate(g, r, r, f_rep), f_rep);
  std::printf("4-photon readouts  = %.6g per pulse each\n", fockline::efficiency(g, 4));
  return 0;
}

int run_fluctuate(const fockline::FluctuationSpec& spec) {
  auto summaries = fockline::fluctuation_mc(spec);
  std::printf("# mean %g dB, spread %g dB, %d samples, seed %llu%s\n",
              spec.mean_attenuation_db, spec.spread_db, spec.samples,
              static_cast<unsigned long long>(spec.seed),
              spec.both ? ", both arms fluctuating" : "");
  std::printf("k,baseline,mean,min,max,mean_gap\n");
  for (const auto& s : summaries)
    std::printf("%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.k, s.baseline, s.mean, s.min,
                s.max, s.baseline - s.mean);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiphoton entanglement distribution: conditional states, "
               "entanglement measures and rates over lossy channels"};
  app.require_subcommand(1);

  // ideal
  int ideal_S = 4;
  auto* ideal = app.add_subcommand("ideal", "lossless readout table: E_N and QFI per k");
  ideal->add_option("--S", ideal_S, "total detected photon number")->check(CLI::Range(0, 1000));

  // sweep
  fockline::SweepSpec sspec;
  std::vector<std::string> points, db_points;
  std::string mode = "full", out_path;
  auto* sweep = app.add_subcommand("sweep", "loss-configuration sweep, CSV output");
  sweep->add_option("--g", sspec.g, "squeezing gain");
  sweep->add_option("--sigma", sspec.sigma, "total detected photons");
  sweep->add_option("--k", sspec.k_set, "detector-1 counts (repeatable)");
  sweep->add_option("--point", points,
                    "grid point r_a2,r_b2,r_s,r_d as reflectivities (repeatable)");
  sweep->add_option("--db-point", db_points,
                    "grid point a2,b2,s,d as attenuations in dB (repeatable)");
  sweep->add_option("--mode", mode, "full | closed")
      ->check(CLI::IsMember({"full", "closed"}));
  sweep->add_option("--n-max", sspec.n_max, "per-source photon cutoff");
  sweep->add_option("--out", out_path, "CSV file (default: stdout)");

  // decompose
  double dg = 0.1, dr = 0.5;
  int dsigma = 4, dk = 0, dsmax = 40;
  auto* dec = app.add_subcommand(
      "decompose", "symmetric-loss conditional state as a sum over source sectors");
  dec->add_option("--g", dg, "squeezing gain");
  dec->add_option("--r", dr, "idler channel reflectivity")->check(CLI::Range(0.0, 1.0));
  dec->add_option("--sigma", dsigma, "total detected photons");
  dec->add_option("--k", dk, "detector-1 count");
  dec->add_option("--s-max", dsmax, "largest source sector kept");

  // rates
  double rg = 0.1, rdb = 80.0, rfrep = 8e7;
  auto* rates = app.add_subcommand("rates", "click probabilities and success rate");
  rates->add_option("--g", rg, "squeezing gain");
  rates->add_option("--db", rdb, "channel attenuation in dB, both arms");
  rates->add_option("--frep", rfrep, "source repetition rate in Hz");

  // fluctuate
  fockline::FluctuationSpec fspec;
  auto* fluc = app.add_subcommand(
      "fluctuate", "Monte Carlo over attenuation fluctuations of the channels");
  fluc->add_option("--g", fspec.g, "squeezing gain");
  fluc->add_option("--sigma", fspec.sigma, "total detected photons");
  fluc->add_option("--k", fspec.k_set, "detector-1 counts (repeatable)");
  fluc->add_option("--mean-db", fspec.mean_attenuation_db, "mean attenuation in dB");
  fluc->add_option("--spread-db", fspec.spread_db, "attenuation spread in dB");
  fluc->add_option("--samples", fspec.samples, "Monte Carlo samples");
  fluc->add_option("--seed", fspec.seed, "RNG stream seed");
  fluc->add_option("--t-b2", fspec.t_b2, "fixed transmittance of the second arm");
  fluc->add_flag("--both", fspec.both, "draw both arms independently");

  try {
    app.parse(argc, argv);
    if (*ideal) return run_ideal(ideal_S);
    if (*sweep) {
      for (const auto& p : points) {
        auto v = split_csv(p, 4, "--point");
        sspec.grid.push_back({v[0], v[1], v[2], v[3]});
      }
      for (const auto& p : db_points) {
        auto v = split_csv(p, 4, "--db-point");
        sspec.grid.push_back({fockline::db_to_reflectivity(v[0]),
                              fockline::db_to_reflectivity(v[1]),
                              fockline::db_to_reflectivity(v[2]),
                              fockline::db_to_reflectivity(v[3])});
      }
      if (sspec.k_set.empty())
        for (int k = 0; k <= sspec.sigma; ++k) sspec.k_set.push_back(k);
      sspec.mode = mode == "full" ? fockline::SweepMode::full_sim
                                  : fockline::SweepMode::closed_form;
      return run_sweep_cmd(sspec, out_path);
    }
    if (*dec) return run_decompose(dg, dr, dsigma, dk, dsmax);
    if (*rates) return run_rates(rg, rdb, rfrep);
    if (*fluc) return run_fluctuate(fspec);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const fockline::invariant_error& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
