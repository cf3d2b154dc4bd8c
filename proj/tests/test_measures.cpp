#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fockline/measures.hpp"
#include "fockline/protocol.hpp"

using namespace fockline;

namespace {

// |psi> = sum_n amp[n] |n, n> as a density operator
FockDensityOperator correlated_pure(const std::vector<double>& amp) {
  const int n_max = static_cast<int>(amp.size()) - 1;
  FockDensityOperator rho(2, n_max);
  for (int n = 0; n <= n_max; ++n)
    for (int m = 0; m <= n_max; ++m)
      rho.add(make_occ({n, n}), make_occ({m, m}), amp[n] * amp[m]);
  return rho;
}

}  // namespace

TEST_CASE("product and classically correlated states carry no negativity") {
  FockDensityOperator prod(2, 2);
  prod.add(make_occ({1, 2}), make_occ({1, 2}), 1.0);
  CHECK(log_negativity(prod, {{0}, {1}}) == doctest::Approx(0.0));

  FockDensityOperator mix(2, 3);  // diagonal mixture of |n,n>
  mix.add(make_occ({0, 0}), make_occ({0, 0}), 0.5);
  mix.add(make_occ({1, 1}), make_occ({1, 1}), 0.3);
  mix.add(make_occ({3, 3}), make_occ({3, 3}), 0.2);
  CHECK(log_negativity(mix, {{0}, {1}}) == doctest::Approx(0.0));
}

TEST_CASE("Bell pair gives exactly one ebit") {
  FockDensityOperator bell(2, 1);
  const double a = 1.0 / std::sqrt(2.0);
  for (auto [n, m] : {std::pair{0, 1}, {1, 0}})
    for (auto [p, q] : {std::pair{0, 1}, {1, 0}})
      bell.add(make_occ({n, m}), make_occ({p, q}), a * a);
  CHECK(log_negativity(bell, {{0}, {1}}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rank-d maximally entangled state gives log2 d") {
  for (int d = 2; d <= 6; ++d) {
    std::vector<double> amp(d, 1.0 / std::sqrt(double(d)));
    auto rho = correlated_pure(amp);
    CHECK(log_negativity(rho, {{0}, {1}}) ==
          doctest::Approx(std::log2(double(d))).epsilon(1e-12));
  }
}

TEST_CASE("split order does not matter") {
  std::vector<double> amp = {0.8, 0.5, 0.33166247903554};  // unit norm
  auto rho = correlated_pure(amp);
  const double ab = log_negativity(rho, {{0}, {1}});
  const double ba = log_negativity(rho, {{1}, {0}});
  CHECK(ab == doctest::Approx(ba).epsilon(1e-13));
  // pure-state value: 2 log2 sum |amp|
  double s = 0.0;
  for (double v : amp) s += std::abs(v);
  CHECK(ab == doctest::Approx(2.0 * std::log2(s)).epsilon(1e-12));
}

TEST_CASE("invalid input is rejected") {
  auto rho = correlated_pure({1.0, 0.0});
  CHECK_THROWS_AS(log_negativity(rho, {{0}, {0, 1}}), std::domain_error);  // overlap
  CHECK_THROWS_AS(log_negativity(rho, {{0}, {}}), std::domain_error);      // misses 1
  CHECK_THROWS_AS(log_negativity(rho, {{0}, {5}}), std::domain_error);     // range
  rho.scale(0.5);
  CHECK_THROWS_AS(log_negativity(rho, {{0}, {1}}), std::domain_error);     // trace
}

TEST_CASE("closed form agrees with the eigenvalue route on conditional states") {
  for (int S : {1, 2, 3, 4, 7, 10})
    for (int k = 0; k <= S; ++k) {
      auto rho = lossless_output_state(S, k);
      CAPTURE(S); CAPTURE(k);
      CHECK(log_negativity(rho, {{0}, {1}}) ==
            doctest::Approx(log_negativity_pure_closed(S, k)).epsilon(1e-11));
    }
}

TEST_CASE("closed-form symmetry in k") {
  for (int k = 0; k <= 4; ++k)
    CHECK(log_negativity_pure_closed(4, k) ==
          doctest::Approx(log_negativity_pure_closed(4, 4 - k)).epsilon(1e-13));
}

TEST_CASE("quantum Fisher information") {
  CHECK(qfi_pure(4, 2) == doctest::Approx(12.0).epsilon(1e-13));
  CHECK(qfi_pure(4, 0) == doctest::Approx(4.0).epsilon(1e-13));
  // the edge readouts carry a binomial(S, 1/2) distribution: variance S/4
  for (int S : {2, 6, 11}) {
    CHECK(qfi_pure(S, 0) == doctest::Approx(double(S)).epsilon(1e-11));
    CHECK(qfi_pure(S, S) == doctest::Approx(double(S)).epsilon(1e-11));
  }
}

TEST_CASE("reference entanglement levels") {
  auto ref = en_reference(4);
  CHECK(ref.en_max == doctest::Approx(std::log2(5.0)));
  CHECK(ref.en_bell == 1.0);
  CHECK(en_max_dimension_variant(4) ==
        doctest::Approx(std::log2(2.0 * std::sqrt(5.0) + 1.0)));
  CHECK_THROWS_AS(en_reference(-1), std::domain_error);
}
