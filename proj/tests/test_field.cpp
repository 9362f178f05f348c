// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "fraclab/errors.hpp"
#include "fraclab/field.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/order.hpp"
#include "fraclab/profile.hpp"
#include "fraclab/spectral.hpp"

using namespace fraclab;

namespace {
constexpr double pi = std::numbers::pi;

HalfSpaceField gaussian_extension(double gamma, int nx, int ny,
                                  double sigma = 0.5) {
  const XGrid g = make_grid(1, nx, 2.0 * pi);
  const Profile p = solve_profile_closed_form(make_order(gamma), 30.0, ny);
  return extend(make_gaussian(g, sigma), p);
}

double rel_l2(const std::vector<double>& got, const std::vector<double>& want) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += (got[i] - want[i]) * (got[i] - want[i]);
    den += want[i] * want[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("the square-root extension of a cosine is the damped cosine") {
  const XGrid g = make_grid(1, 64, 2.0 * pi);
  const Profile p = solve_profile_closed_form(make_order(0.5), 30.0, 512);
  const HalfSpaceField u = extend(make_cosine(g, 1), p);

  REQUIRE(u.iterates.size() == 2);  // m = 0: the field and one iterate
  double sup = 0.0;
  for (std::size_t iy = 0; iy < u.levels(); ++iy)
    for (std::size_t ix = 0; ix < u.stride(); ++ix) {
      const double want = std::cos(g.coord(int(ix))) * std::exp(-u.y_grid[iy]);
      sup = std::max(sup, std::fabs(u.values()[iy * u.stride() + ix] - want));
    }
  CHECK(sup < 1e-10);

  // boundary row is the trace itself, and the final iterate is exact zero
  const BoundaryFunction f = make_cosine(g, 1);
  for (std::size_t ix = 0; ix < u.stride(); ++ix) {
    CHECK(u.values()[ix] == doctest::Approx(f.values[ix]).epsilon(1e-13));
    CHECK(u.iterates.back()[ix] == 0.0);
  }
}

TEST_CASE("the second-order equation residual is small and refines away") {
  for (double gamma : {1.5, 1.3}) {
    const HalfSpaceField coarse = gaussian_extension(gamma, 256, 512);
    const HalfSpaceField fine = gaussian_extension(gamma, 256, 1024);
    const double rc = equation1_residual(coarse);
    const double rf = equation1_residual(fine);
    CHECK(rf < 1e-5);
    CHECK(rc / rf >= 3.0);  // at least first-order gain per doubling
  }
}

TEST_CASE("odd boundary traces of the low iterates vanish under refinement") {
  for (double gamma : {1.5, 2.7}) {
    const auto ord = make_order(gamma);
    const HalfSpaceField half = gaussian_extension(gamma, 256, 512);
    const HalfSpaceField full = gaussian_extension(gamma, 256, 1024);
    for (int k = 0; k < ord.m; ++k) {
      const double r_half = odd_trace_residual(half, k);
      const double r_full = odd_trace_residual(full, k);
      CHECK(r_full < 1e-4);
      CHECK(r_half / r_full >= 3.0);
    }
  }
}

TEST_CASE("planted contaminations are actually detected") {
  HalfSpaceField u = gaussian_extension(1.5, 256, 1024);
  const double clean_eq1 = equation1_residual(u);
  const double clean_odd = odd_trace_residual(u, 0);
  CHECK(clean_eq1 < 1e-5);
  CHECK(clean_odd < 1e-4);

  // a y * e^-y component has a nonzero odd first trace
  HalfSpaceField bumped = u;
  for (std::size_t iy = 0; iy < u.levels(); ++iy) {
    const double y = u.y_grid[iy];
    const double bump = 0.05 * y * std::exp(-y);
    for (std::size_t ix = 0; ix < u.stride(); ++ix)
      bumped.values()[iy * u.stride() + ix] += bump;
  }
  CHECK(odd_trace_residual(bumped, 0) > 1e-3);
  CHECK(odd_trace_residual(bumped, 0) > 10.0 * clean_odd);

  // a y^3 * e^-y component passes the odd-trace gate but violates the
  // second-order equation
  HalfSpaceField cubic = u;
  for (std::size_t iy = 0; iy < u.levels(); ++iy) {
    const double y = u.y_grid[iy];
    const double bump = 0.05 * y * y * y * std::exp(-y);
    for (std::size_t ix = 0; ix < u.stride(); ++ix)
      cubic.values()[iy * u.stride() + ix] += bump;
  }
  CHECK(equation1_residual(cubic) > 1e-3);
  CHECK(equation1_residual(cubic) > 100.0 * clean_eq1);
}

TEST_CASE("the finite-difference operator reproduces the spectral iterate") {
  const HalfSpaceField u = gaussian_extension(1.5, 256, 2048);
  const HalfSpaceField lu = apply_delta_b(u);
  double sup = 0.0;
  for (std::size_t i = 0; i < lu.values().size(); ++i)
    sup = std::max(sup, std::fabs(lu.values()[i] - u.iterates[1][i]));
  CHECK(sup < 1e-5);
}

TEST_CASE("iterates rebuilt by finite differences match the spectral ones") {
  HalfSpaceField u = gaussian_extension(1.5, 256, 1024);
  const std::vector<double> spectral_it1 = u.iterates[1];
  rebuild_iterates_fd(u);
  CHECK(rel_l2(u.iterates[1], spectral_it1) < 1e-6);
}

TEST_CASE("the energy identity holds with the profile constant") {
  for (double gamma : {1.3, 2.5}) {
    const XGrid g = make_grid(1, 512, 2.0 * pi);
    const Profile p = solve_profile_closed_form(make_order(gamma), 30.0, 1024);
    const BoundaryFunction traces[] = {make_cosine(g, 1), make_cosine(g, 3),
                                       make_gaussian(g, 0.5)};
    for (const auto& f : traces) {
      const EnergyReport r = extension_energy(extend(f, p));
      const double expected = g.period * p.J_value;
      CHECK(r.ratio == doctest::Approx(expected).epsilon(1e-3));
      CHECK(r.J_expected == doctest::Approx(p.J_value).epsilon(1e-12));
      CHECK(r.lhs > 0.0);
    }
  }
}

TEST_CASE("the weighted Neumann trace equals the spectral operator") {
  const XGrid g = make_grid(1, 256, 2.0 * pi);
  const auto ord = make_order(2.7);
  const Profile p = solve_profile_closed_form(ord, 30.0, 1024);
  const BoundaryFunction f = make_gaussian(g, 0.5);
  const HalfSpaceField u = extend(f, p);

  BoundaryFunction flux = neumann_trace(u);
  for (double& v : flux.values) v /= p.neumann_c;
  const BoundaryFunction want = frac_laplacian_spectral(f, ord);
  CHECK(rel_l2(flux.values, want.values) < 1e-3);
}

TEST_CASE("the finite part of the divergent energy recovers the halved bulk") {
  const XGrid g = make_grid(1, 256, 2.0 * pi);
  const Profile p = solve_profile_closed_form(make_order(1.5), 30.0, 2048);
  const HalfSpaceField u = extend(make_cosine(g, 2), p);

  const RegularizedEnergyReport rep =
      regularized_energy_limit(u, {0.4, 0.2, 0.1, 0.05, 0.025});
  REQUIRE(rep.finite_part_estimates.size() == 5);
  // analytic target: half of L * J * [f]^2 = (1/2) * 2pi * 2 * 4 = 8 pi
  CHECK(rep.bulk_energy_half == doctest::Approx(8.0 * pi).epsilon(1e-3));
  CHECK(rep.extrapolated_limit ==
        doctest::Approx(rep.bulk_energy_half).epsilon(1e-2));

  // a finer epsilon ladder tightens the agreement
  const RegularizedEnergyReport coarse =
      regularized_energy_limit(u, {0.4, 0.2, 0.1});
  const double fine_gap =
      std::fabs(rep.extrapolated_limit - rep.bulk_energy_half);
  const double coarse_gap =
      std::fabs(coarse.extrapolated_limit - coarse.bulk_energy_half);
  CHECK(fine_gap < coarse_gap);

  // the identity is specific to the first half-odd order above one
  const HalfSpaceField other = gaussian_extension(1.3, 64, 512);
  CHECK_THROWS_AS(regularized_energy_limit(other, {0.4, 0.2, 0.1}),
                  WrongOrderError);
}

TEST_CASE("the trace inequality holds with the identity constant") {
  const HalfSpaceField u = gaussian_extension(1.3, 256, 1024);
  const TraceInequality t = trace_inequality_check(u);
  CHECK(t.ok);
  CHECK(t.lhs > 0.0);
  CHECK(t.lhs <= t.rhs * (1.0 + 1e-9));
}

TEST_CASE("two boundary dimensions extend the same way") {
  const XGrid g = make_grid(2, 32, 2.0 * pi);
  const auto ord = make_order(0.5);
  const Profile p = solve_profile_closed_form(ord, 30.0, 512);
  const BoundaryFunction f = make_cosine(g, 1);
  const HalfSpaceField u = extend(f, p);

  double sup = 0.0;
  for (std::size_t iy = 0; iy < u.levels(); ++iy)
    for (int i0 = 0; i0 < 32; ++i0)
      for (int i1 = 0; i1 < 32; ++i1) {
        const double want =
            std::cos(g.coord(i0)) * std::exp(-u.y_grid[iy]);
        const double got =
            u.values()[iy * u.stride() + std::size_t(i0) * 32 + i1];
        sup = std::max(sup, std::fabs(got - want));
      }
  CHECK(sup < 1e-10);

  // energy ratio carries the box volume L^2 in two dimensions
  const EnergyReport r = extension_energy(u);
  CHECK(r.ratio == doctest::Approx(4.0 * pi * pi * p.J_value).epsilon(1e-3));

  BoundaryFunction flux = neumann_trace(u);
  for (double& v : flux.values) v /= p.neumann_c;
  const BoundaryFunction want = frac_laplacian_spectral(f, ord);
  double nsup = 0.0;
  for (std::size_t i = 0; i < flux.values.size(); ++i)
    nsup = std::max(nsup, std::fabs(flux.values[i] - want.values[i]));
  CHECK(nsup < 1e-6);
}

TEST_CASE("malformed inputs are rejected with the documented errors") {
  const XGrid g = make_grid(1, 64, 2.0 * pi);
  const Profile p = solve_profile_closed_form(make_order(1.5), 30.0, 512);

  BoundaryFunction bad{g, std::vector<double>(17, 0.0)};
  CHECK_THROWS_AS(extend(bad, p), GridMismatchError);

  Profile tiny = p;
  tiny.y_grid.resize(3);
  CHECK_THROWS_AS(extend(make_cosine(g, 1), tiny), GridMismatchError);

  HalfSpaceField u = extend(make_gaussian(g, 0.5), p);
  CHECK_THROWS_AS(odd_trace_residual(u, 7), WrongOrderError);
  CHECK_THROWS_AS(regularized_energy_limit(u, {}), GridMismatchError);
  CHECK_THROWS_AS(regularized_energy_limit(u, {0.1, 0.2, 0.4}),
                  GridMismatchError);  // must decrease

  HalfSpaceField corrupt = u;
  for (double& v : corrupt.iterates[1]) v += 0.5;  // non-decaying tail
  CHECK_THROWS_AS(extension_energy(corrupt), DivergentEnergyError);

  HalfSpaceField truncated = u;
  truncated.y_grid.resize(4);
  CHECK_THROWS_AS(equation1_residual(truncated), InsufficientGridError);
}
