#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "casikit/core.hpp"

using namespace casikit;

TEST_CASE("error budget examples") {
  // n=-3, d=100 nm, 0.5% force accuracy -> 0.167 nm
  CHECK(error_budget(-3.0, 100e-9, 0.005) == doctest::Approx(1.6667e-10).epsilon(1e-3));
  // unit exponent passes the fraction straight through
  CHECK(error_budget(-1.0, 3.7e-6, 0.02) == doctest::Approx(0.02 * 3.7e-6).epsilon(1e-12));
  // n=-4, d=1 um, 1% -> 2.5 nm
  CHECK(error_budget(-4.0, 1e-6, 0.01) == doctest::Approx(2.5e-9).epsilon(1e-12));
}

TEST_CASE("error budget linearity") {
  const double base = error_budget(-3.0, 1e-6, 0.01);
  CHECK(error_budget(-3.0, 2e-6, 0.01) == doctest::Approx(2.0 * base));
  CHECK(error_budget(-3.0, 1e-6, 0.02) == doctest::Approx(2.0 * base));
  // halving |n| doubles the budget
  CHECK(error_budget(-1.5, 1e-6, 0.01) == doctest::Approx(2.0 * base));
  // sign of n does not matter
  CHECK(error_budget(3.0, 1e-6, 0.01) == doctest::Approx(base));
}

TEST_CASE("error budget domain errors") {
  CHECK_THROWS_AS(error_budget(0.0, 1e-6, 0.01), DomainError);
  CHECK_THROWS_AS(error_budget(-3.0, -1e-6, 0.01), DomainError);
  CHECK_THROWS_AS(error_budget(-3.0, 1e-6, 0.0), DomainError);
}

TEST_CASE("constants are CODATA 2018") {
  CHECK(constants::hbar == 1.054571817e-34);
  CHECK(constants::c == 299792458.0);
  CHECK(constants::k_b == 1.380649e-23);
  CHECK(constants::eps0 == 8.8541878128e-12);
  CHECK(constants::e_charge == 1.602176634e-19);
}
