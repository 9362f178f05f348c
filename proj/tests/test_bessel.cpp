// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fraclab/bessel.hpp"
#include "fraclab/errors.hpp"

using namespace fraclab;

namespace {

// Half-integer orders collapse to elementary functions:
//   K_{1/2}(x) = sqrt(pi/2x) e^-x
//   K_{3/2}(x) = sqrt(pi/2x) e^-x (1 + 1/x)
//   K_{5/2}(x) = sqrt(pi/2x) e^-x (1 + 3/x + 3/x^2)
double k_half(double x) { return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x); }
double k_3half(double x) { return k_half(x) * (1.0 + 1.0 / x); }
double k_5half(double x) { return k_half(x) * (1.0 + 3.0 / x + 3.0 / (x * x)); }

}  // namespace

TEST_CASE("half-integer orders match the elementary closed forms") {
  for (double x : {0.1, 1.0, 5.0, 20.0}) {
    CHECK(bessel_k(0.5, x) == doctest::Approx(k_half(x)).epsilon(1e-13));
    CHECK(bessel_k(1.5, x) == doctest::Approx(k_3half(x)).epsilon(1e-13));
    CHECK(bessel_k(2.5, x) == doctest::Approx(k_5half(x)).epsilon(1e-13));
  }
}

TEST_CASE("fractional orders match high-precision reference values") {
  // Reference values computed with 50-digit arithmetic and frozen here.
  CHECK(bessel_k(1.3, 2.6) == doctest::Approx(0.0730306824099633).epsilon(1e-12));
  CHECK(bessel_k(0.7, 0.35) == doctest::Approx(1.78340486153451).epsilon(1e-12));
  CHECK(bessel_k(2.4, 7.0) == doctest::Approx(0.000623062847108).epsilon(1e-12));
  CHECK(scaled_bessel_k(0.3, 12.0) ==
        doctest::Approx(0.359488889009042).epsilon(1e-12));
}

TEST_CASE("K is even in the order") {
  for (double nu : {0.3, 0.7, 1.3, 2.4}) {
    for (double x : {0.2, 1.0, 3.0, 9.0}) {
      CHECK(scaled_bessel_k(-nu, x) ==
            doctest::Approx(scaled_bessel_k(nu, x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("the three-term order recurrence holds across the evaluation regimes") {
  // K_{nu+1}(x) = K_{nu-1}(x) + (2 nu / x) K_nu(x); checked in scaled form
  // on both sides of the series/continued-fraction switchover at x = 2.
  for (double nu : {0.4, 0.8, 1.6}) {
    for (double x : {0.5, 1.5, 2.5, 8.0, 40.0}) {
      const double lhs = scaled_bessel_k(nu + 1.0, x);
      const double rhs =
          scaled_bessel_k(nu - 1.0, x) + (2.0 * nu / x) * scaled_bessel_k(nu, x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("y_pow_k is continuous at the origin with the Gamma-function limit") {
  // lim_{y->0} y^nu K_nu(y) = 2^(nu-1) Gamma(nu)
  CHECK(y_pow_k(1.3, 0.0) == doctest::Approx(1.10491603389825).epsilon(1e-12));
  CHECK(y_pow_k(0.5, 0.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-12));
  // approach from above is smooth: small-y values converge to the limit
  const double lim = y_pow_k(1.3, 0.0);
  double prev_gap = std::fabs(y_pow_k(1.3, 1e-2) - lim);
  for (double y : {1e-3, 1e-4}) {
    const double gap = std::fabs(y_pow_k(1.3, y) - lim);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-7);
}

TEST_CASE("scaling keeps large arguments representable") {
  // e^x K_nu(x) ~ sqrt(pi/2x) stays O(1); the unscaled value underflows.
  const double scaled = scaled_bessel_k(0.9, 800.0);
  CHECK(std::isfinite(scaled));
  CHECK(scaled == doctest::Approx(std::sqrt(std::numbers::pi / 1600.0)).epsilon(1e-3));
  CHECK(bessel_k(0.9, 800.0) == 0.0);  // deliberate underflow
  CHECK(y_pow_k(0.9, 800.0) == 0.0);
}

TEST_CASE("non-positive and non-finite arguments are rejected") {
  CHECK_THROWS_AS(scaled_bessel_k(0.5, 0.0), BesselEvalFailure);
  CHECK_THROWS_AS(scaled_bessel_k(0.5, -1.0), BesselEvalFailure);
  CHECK_THROWS_AS(bessel_k(1.3, 0.0), BesselEvalFailure);
  CHECK_THROWS_AS(scaled_bessel_k(0.5, std::numeric_limits<double>::quiet_NaN()),
                  BesselEvalFailure);
  CHECK_THROWS_AS(scaled_bessel_k(0.5, std::numeric_limits<double>::infinity()),
                  BesselEvalFailure);
}
