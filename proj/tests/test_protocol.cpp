#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fockline/protocol.hpp"

using namespace fockline;

namespace {

double max_entry_diff(const FockDensityOperator& a, const FockDensityOperator& b) {
  double d = 0.0;
  for (const auto& [key, v] : a.entries())
    d = std::max(d, std::abs(v - b.entry(key.bra, key.ket)));
  for (const auto& [key, v] : b.entries())
    d = std::max(d, std::abs(v - a.entry(key.bra, key.ket)));
  return d;
}

}  // namespace

TEST_CASE("lossless pipeline reproduces the closed-form conditional states") {
  PipelineConfig cfg;
  cfg.g = 0.1;
  for (int sigma : {2, 4})
    for (int k = 0; k <= sigma; ++k) {
      cfg.readout = Readout{k, sigma};
      auto res = simulate_pipeline(cfg).at(0);
      CAPTURE(sigma); CAPTURE(k);
      CHECK(res.probability == doctest::Approx(efficiency(cfg.g, sigma)).epsilon(1e-9));
      CHECK(res.e_n_defined);
      CHECK(res.e_n ==
            doctest::Approx(log_negativity_pure_closed(sigma, k)).epsilon(1e-10));
      CHECK(max_entry_diff(res.state, lossless_output_state(sigma, k)) < 1e-11);
    }
}

TEST_CASE("lossless entanglement is independent of the gain") {
  for (double g : {0.05, 0.3, 0.8}) {
    PipelineConfig cfg;
    cfg.g = g;
    cfg.n_max = 10;
    cfg.readout = Readout{1, 4};
    auto res = simulate_pipeline(cfg).at(0);
    CAPTURE(g);
    CHECK(res.e_n == doctest::Approx(log_negativity_pure_closed(4, 1)).epsilon(1e-9));
  }
}

TEST_CASE("fused pipeline matches the serial reference under full losses") {
  PipelineConfig cfg;
  cfg.g = 0.3;
  cfg.n_max = 3;
  cfg.sigma_max = 4;
  cfg.losses = {0.35, 0.2, 0.15, 0.25, 0.4, 0.1};
  auto fused = simulate_pipeline(cfg);
  auto reference = ref::simulate_pipeline(cfg);
  REQUIRE(fused.size() == reference.size());
  for (size_t i = 0; i < fused.size(); ++i) {
    CAPTURE(i);
    CHECK(fused[i].k == reference[i].k);
    CHECK(fused[i].sigma == reference[i].sigma);
    CHECK(fused[i].probability ==
          doctest::Approx(reference[i].probability).epsilon(1e-10));
    CHECK(fused[i].e_n_defined == reference[i].e_n_defined);
    if (fused[i].e_n_defined) {
      CHECK(fused[i].e_n == doctest::Approx(reference[i].e_n).epsilon(1e-9));
      CHECK(max_entry_diff(fused[i].state, reference[i].state) < 1e-11);
    }
  }
}

TEST_CASE("kernel and ancilla backends agree in the production pipeline") {
  PipelineConfig cfg;
  cfg.g = 0.2;
  cfg.n_max = 4;
  cfg.losses.r_a2 = 0.5;
  cfg.losses.r_b1 = 0.3;
  cfg.readout = Readout{1, 2};
  auto kern = simulate_pipeline(cfg).at(0);
  cfg.loss_backend = LossBackend::ancilla;
  auto anc = simulate_pipeline(cfg).at(0);
  CHECK(kern.probability == doctest::Approx(anc.probability).epsilon(1e-12));
  CHECK(max_entry_diff(kern.state, anc.state) < 1e-12);
}

TEST_CASE("parallel and single-worker runs are identical") {
  PipelineConfig cfg;
  cfg.g = 0.4;
  cfg.n_max = 4;
  cfg.losses = {0.3, 0.3, 0.0, 0.0, 0.2, 0.2};
  cfg.readout = Readout{2, 3};
  auto par = simulate_pipeline(cfg).at(0);
  cfg.parallel = false;
  auto ser = simulate_pipeline(cfg).at(0);
  CHECK(par.probability == ser.probability);  // bit-identical merge order
  CHECK(max_entry_diff(par.state, ser.state) == 0.0);
}

TEST_CASE("unreachable readouts are flagged, not computed") {
  PipelineConfig cfg;
  cfg.g = 0.1;
  cfg.n_max = 2;
  cfg.readout = Readout{0, 5};  // above the 2 * n_max photon budget
  auto res = simulate_pipeline(cfg).at(0);
  CHECK(res.probability == 0.0);
  CHECK_FALSE(res.e_n_defined);
  cfg.readout = Readout{3, 2};
  CHECK_THROWS_AS(simulate_pipeline(cfg), std::domain_error);
  cfg.readout.reset();
  cfg.losses.r_a2 = 1.5;
  CHECK_THROWS_AS(simulate_pipeline(cfg), std::domain_error);
}

TEST_CASE("chi weights: endpoints and S-ratio") {
  const double g = 0.1, r = 0.6;
  const double tau = std::tanh(g) * std::tanh(g);
  // S = sigma term is the bare Schmidt weight
  CHECK(chi_weight(g, r, 4, 4) ==
        doctest::Approx(std::pow(tau, 4) / (std::cosh(g) * std::cosh(g))).epsilon(1e-13));
  for (int S : {4, 5, 9})
    CHECK(chi_weight(g, r, 4, S + 1) / chi_weight(g, r, 4, S) ==
          doctest::Approx(r * tau * (S + 2.0) / (S - 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(chi_weight(g, r, 4, 3), std::domain_error);
}

TEST_CASE("normalization identity returns the binomial") {
  CHECK(normalization_identity(4, 4, 0) == 1);
  CHECK(normalization_identity(8, 4, 1) == 126);   // binom(9, 5)
  CHECK(normalization_identity(10, 3, 2) == 330);  // binom(11, 4)
  CHECK(normalization_identity(20, 6, 3) == 116280);
}

TEST_CASE("symmetric decomposition: structure of the terms") {
  auto d = symmetric_decomposition(0.1, 0.5, 4, 1, 12);
  REQUIRE(d.terms.size() == 9);
  CHECK_FALSE(d.truncated);
  CHECK(max_entry_diff(d.terms[0].rho_int, lossless_output_state(4, 1)) < 1e-12);
  for (const auto& term : d.terms) {
    CAPTURE(term.S);
    CHECK(term.chi == doctest::Approx(chi_weight(0.1, 0.5, 4, term.S)));
    CHECK(term.rho_int.trace() == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(term.rho_int.min_eigenvalue() > -1e-11);
    CHECK(term.rho_int.hermiticity_defect() < 1e-13);
  }
  CHECK(symmetric_decomposition(0.1, 0.9, 4, 1, 4).truncated);
}

TEST_CASE("symmetric decomposition matches the full simulation") {
  PipelineConfig cfg;
  cfg.g = 0.1;
  cfg.losses.r_a2 = cfg.losses.r_b2 = 0.5;
  cfg.readout = Readout{2, 2};
  auto sim = simulate_pipeline(cfg).at(0);
  auto d = symmetric_decomposition(0.1, 0.5, 2, 2, 16);
  CHECK(max_entry_diff(d.combined(), sim.state) < 1e-10);
  CHECK(log_negativity(d.combined(), {{0}, {1}}) ==
        doctest::Approx(sim.e_n).epsilon(1e-9));
}

TEST_CASE("one-sided loss state matches the full simulation") {
  PipelineConfig cfg;
  cfg.g = 0.1;
  cfg.losses.r_a2 = 0.5;  // epsilon = 0.5 against a lossless second idler
  cfg.readout = Readout{1, 4};
  auto sim = simulate_pipeline(cfg).at(0);
  auto rho = epsilon_state(0.1, 0.5, 4, 1, 16);
  CHECK(max_entry_diff(rho, sim.state) < 1e-10);

  // epsilon = 1 reproduces the lossless conditional state
  CHECK(max_entry_diff(epsilon_state(0.1, 1.0, 4, 1, 12), lossless_output_state(4, 1)) <
        1e-13);
  CHECK_THROWS_AS(epsilon_state(0.1, 0.0, 4, 1, 12), std::domain_error);
  CHECK_THROWS_AS(epsilon_state(0.1, 1.2, 4, 1, 12), std::domain_error);
}

TEST_CASE("vacuum probability: geometric series and full simulation") {
  const double g = 0.25, r_a = 0.7, r_b = 0.4;
  const double tau = std::tanh(g) * std::tanh(g);
  // per-source no-click weight sum_n lambda_n r^n
  double series = 1.0;
  {
    double sa = 0.0, sb = 0.0, w = 1.0 / (std::cosh(g) * std::cosh(g));
    for (int n = 0; n < 200; ++n) {
      sa += w * std::pow(r_a, n);
      sb += w * std::pow(r_b, n);
      w *= tau;
    }
    series = sa * sb;
  }
  CHECK(vacuum_probability(g, r_a, r_b) == doctest::Approx(series).epsilon(1e-12));

  PipelineConfig cfg;
  cfg.g = g;
  cfg.losses.r_a2 = r_a;
  cfg.losses.r_b2 = r_b;
  cfg.readout = Readout{0, 0};
  auto res = simulate_pipeline(cfg).at(0);
  CHECK(res.probability == doctest::Approx(vacuum_probability(g, r_a, r_b)).epsilon(1e-9));
}

TEST_CASE("success rate arithmetic") {
  const double g = 0.1, r = 0.99;
  CHECK(success_rate(g, r, r, 8e7) ==
        doctest::Approx(8e7 * (1.0 - vacuum_probability(g, r, r))).epsilon(1e-13));
  CHECK_THROWS_AS(success_rate(g, r, r, -1.0), std::domain_error);
  CHECK_THROWS_AS(efficiency(0.0, 4), std::domain_error);
}

TEST_CASE("result source labels") {
  CHECK(std::string(to_string(ResultSource::simulated)) == "simulated");
  CHECK(std::string(to_string(ResultSource::closed_form_lossless)) ==
        "closed_form_lossless");
  CHECK(std::string(to_string(ResultSource::closed_form_symmetric)) ==
        "closed_form_symmetric");
  CHECK(std::string(to_string(ResultSource::closed_form_epsilon)) ==
        "closed_form_epsilon");
}
