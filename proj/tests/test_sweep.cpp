#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fockline/rng.hpp"
#include "fockline/sweep.hpp"

using namespace fockline;

TEST_CASE("counter RNG is a pure function of (seed, index)") {
  CHECK(counter_rng(1, 0) == counter_rng(1, 0));
  CHECK(counter_rng(1, 0) != counter_rng(1, 1));
  CHECK(counter_rng(1, 0) != counter_rng(2, 0));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = uniform01(42, i);
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("inverse normal CDF hits the textbook quantiles") {
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0));
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540).epsilon(1e-10));
  CHECK(inverse_normal_cdf(0.16) == doctest::Approx(-0.994457883210).epsilon(1e-9));
  CHECK(inverse_normal_cdf(1e-9) == doctest::Approx(-5.997807015008).epsilon(1e-9));
  CHECK(inverse_normal_cdf(0.3) == -inverse_normal_cdf(0.7));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), std::domain_error);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), std::domain_error);
}

TEST_CASE("sweep: closed form agrees with the full simulation") {
  SweepSpec spec;
  spec.g = 0.1;
  spec.sigma = 4;
  spec.k_set = {0, 1, 2};
  spec.grid = {{0.0, 0.0, 0.0, 0.0}, {0.5, 0.5, 0.0, 0.0}, {0.9, 0.9, 0.0, 0.0},
               {0.6, 0.0, 0.0, 0.0}};
  spec.mode = SweepMode::full_sim;
  auto full = run_sweep(spec);
  spec.mode = SweepMode::closed_form;
  auto closed = run_sweep(spec);
  REQUIRE(full.size() == closed.size());
  for (size_t i = 0; i < full.size(); ++i) {
    CAPTURE(i);
    CHECK(full[i].probability == doctest::Approx(closed[i].probability).epsilon(1e-8));
    CHECK(full[i].e_n == doctest::Approx(closed[i].e_n).epsilon(1e-8));
    CHECK(full[i].source == "simulated");
    CHECK(closed[i].source != "simulated");
    CHECK(closed[i].e_n >= 0.0);
    CHECK(closed[i].e_n <= std::log2(spec.sigma + 1.0) + 1e-9);
  }
  CHECK(closed[0].source == "closed_form_lossless");
  CHECK(closed[3].source == "closed_form_symmetric");
  CHECK(closed[9].source == "closed_form_epsilon");
}

TEST_CASE("sweep rejections name the grid entry") {
  SweepSpec spec;
  spec.g = 0.1;
  spec.sigma = 2;
  spec.k_set = {0};
  spec.grid = {{0.1, 0.1, 0.0, 0.0}, {0.1, 0.1, 0.3, 0.0}};
  spec.mode = SweepMode::closed_form;
  try {
    run_sweep(spec);
    FAIL("expected rejection of the signal-lossy point");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("point 1") != std::string::npos);
  }
  spec.grid = {{0.1, -0.2, 0.0, 0.0}};
  try {
    run_sweep(spec);
    FAIL("expected rejection of the negative reflectivity");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("point 0") != std::string::npos);
  }
}

TEST_CASE("sweep: empty readout set gives an empty table") {
  SweepSpec spec;
  spec.g = 0.1;
  spec.sigma = 4;
  spec.grid = {{0.0, 0.0, 0.0, 0.0}};
  CHECK(run_sweep(spec).empty());
}

TEST_CASE("emitted tables are stable and round-trip") {
  SweepRow row{0.1, 4, 2, 0.5, 0.25, 0.0, 0.125, 1.234567890123e-9, 1.5, "simulated"};
  CHECK(format_row(row) ==
        "0.1,4,2,0.5,0.25,0,0.125,1.23456789012e-09,1.5,simulated");
  CHECK(std::string(kSweepHeader) ==
        "g,sigma,k,r_a2,r_b2,r_s,r_d,probability,e_n,source");

  SweepSpec spec;
  spec.g = 0.1;
  spec.sigma = 2;
  spec.k_set = {0, 1};
  spec.grid = {{0.0, 0.0, 0.0, 0.0}, {0.3, 0.3, 0.0, 0.0}};
  spec.mode = SweepMode::closed_form;
  auto rows = run_sweep(spec);
  const std::string path = "sweep_roundtrip_tmp.csv";
  emit_table(rows, path);

  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string content = ss.str();
  CHECK(content.find("\r") == std::string::npos);  // LF only
  std::string expect = std::string(kSweepHeader) + "\n";
  for (const auto& r : rows) expect += format_row(r) + "\n";
  CHECK(content == expect);
  std::remove(path.c_str());

  CHECK_THROWS_AS(emit_table(rows, "no_such_dir/x.csv"), std::runtime_error);
}

TEST_CASE("fluctuation MC: determinism and degenerate spread") {
  FluctuationSpec spec;
  spec.g = 0.1;
  spec.sigma = 4;
  spec.k_set = {0, 2};
  spec.samples = 24;
  spec.mean_attenuation_db = 30.0;
  spec.spread_db = 0.0;
  auto flat = fluctuation_mc(spec);
  REQUIRE(flat.size() == 2);
  for (const auto& s : flat) {
    CHECK(s.max - s.min == 0.0);
    CHECK(s.mean == doctest::Approx(s.baseline).epsilon(1e-14));
    for (double v : s.values) CHECK(v == s.baseline);
  }

  spec.spread_db = 1.0;
  auto a = fluctuation_mc(spec);
  auto b = fluctuation_mc(spec);
  for (size_t ki = 0; ki < a.size(); ++ki) {
    CHECK(a[ki].values == b[ki].values);  // bit-identical for a fixed seed
    CHECK(a[ki].min <= a[ki].mean);
    CHECK(a[ki].mean <= a[ki].max);
    CHECK(a[ki].min >= 0.0);
  }
  spec.seed = 7;
  auto c = fluctuation_mc(spec);
  CHECK(c[0].values != a[0].values);

  spec.samples = 0;
  CHECK_THROWS_AS(fluctuation_mc(spec), std::domain_error);
}

TEST_CASE("fluctuation MC: both-arms mode differs from one-arm mode") {
  FluctuationSpec spec;
  spec.g = 0.1;
  spec.sigma = 4;
  spec.k_set = {1};
  spec.samples = 16;
  spec.mean_attenuation_db = 40.0;
  auto one = fluctuation_mc(spec);
  spec.both = true;
  auto two = fluctuation_mc(spec);
  CHECK(one[0].values != two[0].values);
  CHECK(one[0].baseline == doctest::Approx(two[0].baseline));
}
