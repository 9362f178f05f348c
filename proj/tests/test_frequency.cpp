// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fraclab/errors.hpp"
#include "fraclab/field.hpp"
#include "fraclab/frequency.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/order.hpp"
#include "fraclab/profile.hpp"
#include "fraclab/spectral.hpp"

using namespace fraclab;

namespace {
constexpr double pi = std::numbers::pi;

// Synthetic field over the graded tensor grid: iterates[0] = f(x, y), with
// enough explicit zero iterates appended for harmonic test solutions.
HalfSpaceField synth(const XGrid& g, const FractionalOrder& ord, double y_top,
                     int ny, double (*f)(double, double), int zero_tails) {
  HalfSpaceField w;
  w.x_grid = g;
  w.ord = ord;
  w.y_max = y_top;
  w.y_grid.resize(ny + 1);
  for (int j = 0; j <= ny; ++j) {
    const double s = static_cast<double>(j) / ny;
    w.y_grid[j] = y_top * s * s;
  }
  const std::size_t nx = g.total_points();
  w.iterates.assign(1, std::vector<double>(nx * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (std::size_t i = 0; i < nx; ++i)
      w.iterates[0][j * nx + i] = f(g.coord(int(i)), w.y_grid[j]);
  for (int t = 0; t < zero_tails; ++t)
    w.iterates.emplace_back(w.iterates[0].size(), 0.0);
  return w;
}

namespace fields {
double axis(double x, double) { return x - pi; }
double height(double, double y) { return y; }
double saddle(double x, double y) {
  return (x - pi) * (x - pi) - (y - 1.3) * (y - 1.3);
}
double harm(double x, double y) { return std::sin(x) * std::exp(-y); }
double ysq(double, double y) { return y * y; }
double ysq_src(double, double) { return 2.0 + 2.0 * 0.4; }
double zero(double, double) { return 0.0; }
}  // namespace fields

double weight_sum(const std::vector<BallQuadrature::Node>& nodes) {
  double s = 0.0;
  for (const auto& n : nodes) s += n.w;
  return s;
}

}  // namespace

TEST_CASE("ball quadrature weights integrate the weighted measure exactly") {
  {
    // interior disk, no weight: area and circumference
    const BallQuadrature q = make_ball_quadrature(pi, 1.3, 0.4, 0.0, 32, 48);
    CHECK(weight_sum(q.volume_nodes) ==
          doctest::Approx(pi * 0.16).epsilon(1e-13));
    CHECK(weight_sum(q.surface_nodes) ==
          doctest::Approx(2.0 * pi * 0.4).epsilon(1e-13));
    CHECK_FALSE(q.half_ball);
  }
  {
    // boundary-centered half-disk, weight y^0.4: the angular factor is
    // int_0^pi sin(t)^0.4 dt = 2.50579557634068 (frozen reference value)
    const double S = 2.50579557634068;
    const double r = 0.9;
    const BallQuadrature q = make_ball_quadrature(pi, 0.0, r, 0.4, 32, 48);
    CHECK(q.half_ball);
    CHECK(weight_sum(q.volume_nodes) ==
          doctest::Approx(std::pow(r, 2.4) / 2.4 * S).epsilon(1e-12));
    CHECK(weight_sum(q.surface_nodes) ==
          doctest::Approx(std::pow(r, 1.4) * S).epsilon(1e-12));
  }
}

TEST_CASE("ball quadrature rejects rules it cannot build") {
  CHECK_THROWS_AS(make_ball_quadrature(pi, 0.0, -0.1, 0.0, 16, 16),
                  QuadratureOutOfDomainError);
  CHECK_THROWS_AS(make_ball_quadrature(pi, 0.0, 0.0, 0.0, 16, 16),
                  QuadratureOutOfDomainError);
  CHECK_THROWS_AS(make_ball_quadrature(pi, 0.0, 0.5, 0.0, 1, 16),
                  QuadratureOutOfDomainError);
  CHECK_THROWS_AS(make_ball_quadrature(pi, 0.0, 0.5, 0.0, 16, 3),
                  QuadratureOutOfDomainError);
  CHECK_THROWS_AS(make_ball_quadrature(pi, -0.2, 0.5, 0.0, 16, 16),
                  QuadratureOutOfDomainError);
  // interior ball touching or crossing the trace plane
  CHECK_THROWS_AS(make_ball_quadrature(pi, 0.3, 0.5, 0.0, 16, 16),
                  QuadratureOutOfDomainError);
  CHECK_THROWS_AS(make_ball_quadrature(pi, 0.5, 0.5, 0.0, 16, 16),
                  QuadratureOutOfDomainError);
}

TEST_CASE("D and H have their elementary values on a linear solution") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const HalfSpaceField w = synth(g, make_order(0.5), 4.0, 512, fields::axis, 1);
  for (double r : {0.3, 0.5}) {
    const BallQuadrature q = make_ball_quadrature(pi, 1.3, r, 0.0, 48, 64);
    // |grad(x - pi)|^2 = 1: D = area; H = int (r cos)^2 r dt = pi r^3
    CHECK(compute_D(w, q) == doctest::Approx(pi * r * r).epsilon(1e-10));
    CHECK(compute_H(w, q) == doctest::Approx(pi * r * r * r).epsilon(1e-10));
    CHECK(compute_N(w, q) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("the frequency of a homogeneous harmonic equals its degree") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const HalfSpaceField w2 =
      synth(g, make_order(0.5), 4.0, 512, fields::saddle, 1);
  for (double r : {0.3, 0.6, 0.9}) {
    const BallQuadrature q = make_ball_quadrature(pi, 1.3, r, 0.0, 48, 64);
    CHECK(compute_N(w2, q) == doctest::Approx(2.0).epsilon(1e-3));
  }
}

TEST_CASE("the height function has frequency one on half-balls for b = 0") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const HalfSpaceField w =
      synth(g, make_order(0.5), 4.0, 512, fields::height, 1);
  for (double r : {0.2, 0.5, 0.8}) {
    const BallQuadrature q = make_ball_quadrature(pi, 0.0, r, 0.0, 48, 64);
    CHECK(compute_N(w, q) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("frequency is scale covariant for a degree-one trace solution") {
  // m = 1 exercises the multi-iterate sums with explicit zero sources
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const HalfSpaceField w = synth(g, make_order(1.5), 4.0, 512, fields::axis, 2);
  std::vector<double> radii;
  for (int i = 0; i < 8; ++i) radii.push_back(0.15 + 0.1 * i);
  const FrequencyReport rep = frequency_scan(w, pi, 0.0, radii);
  REQUIRE(rep.N_values.size() == radii.size());
  for (double n : rep.N_values) CHECK(n == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("Rellich identity vanishes on its two exact validity domains") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const FractionalOrder flat = make_order(0.5);
  const FractionalOrder tilted = make_order(1.3);  // b = 0.4
  const HalfSpaceField none = synth(g, flat, 4.0, 512, fields::zero, 0);

  {  // harmonic linear solution, interior ball, b = 0
    const HalfSpaceField w = synth(g, flat, 4.0, 512, fields::axis, 0);
    const BallQuadrature q = make_ball_quadrature(pi, 1.3, 0.7, 0.0, 48, 64);
    CHECK(rellich_residual(w, none, q) < 1e-8);
  }
  {  // weighted equation with constant source, boundary-centered, b = 0.4
    const HalfSpaceField w = synth(g, tilted, 4.0, 512, fields::ysq, 0);
    const HalfSpaceField v = synth(g, tilted, 4.0, 512, fields::ysq_src, 0);
    const BallQuadrature q = make_ball_quadrature(pi, 0.0, 0.8, 0.4, 48, 64);
    CHECK(rellich_residual(w, v, q) < 1e-6);
  }
  {  // degree-2 harmonic, interior, b = 0
    const HalfSpaceField w = synth(g, flat, 4.0, 512, fields::saddle, 0);
    const BallQuadrature q = make_ball_quadrature(pi, 1.3, 0.7, 0.0, 48, 64);
    CHECK(rellich_residual(w, none, q) < 1e-6);
  }
}

TEST_CASE("Rellich residual drops by at least 4x when the rule is quadrupled") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const FractionalOrder flat = make_order(0.5);
  const HalfSpaceField w = synth(g, flat, 4.0, 512, fields::harm, 0);
  const HalfSpaceField none = synth(g, flat, 4.0, 512, fields::zero, 0);
  const BallQuadrature qc = make_ball_quadrature(pi, 1.3, 0.7, 0.0, 4, 8);
  const BallQuadrature qf = make_ball_quadrature(pi, 1.3, 0.7, 0.0, 8, 16);
  const double rc = rellich_residual(w, none, qc);
  const double rf = rellich_residual(w, none, qf);
  CHECK(rf < 1e-6);
  CHECK(rc / rf >= 4.0);
}

TEST_CASE("off its validity domains the Rellich residual is genuinely nonzero") {
  // interior ball with b != 0: the weight term pairs with the wrong vector
  // field and the b * center_y correction must show up, not vanish
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const FractionalOrder tilted = make_order(1.3);
  const HalfSpaceField w = synth(g, tilted, 4.0, 512, fields::ysq, 0);
  const HalfSpaceField v = synth(g, tilted, 4.0, 512, fields::ysq_src, 0);
  const BallQuadrature q = make_ball_quadrature(pi, 1.3, 0.7, 0.4, 48, 64);
  CHECK(rellich_residual(w, v, q) > 1e-2);
}

TEST_CASE("Rellich rejects operands living on different grids") {
  const XGrid g1 = make_grid(1, 512, 2.0 * pi);
  const XGrid g2 = make_grid(1, 256, 2.0 * pi);
  const FractionalOrder flat = make_order(0.5);
  const HalfSpaceField w = synth(g1, flat, 4.0, 512, fields::axis, 0);
  const HalfSpaceField v = synth(g2, flat, 4.0, 512, fields::zero, 0);
  const BallQuadrature q = make_ball_quadrature(pi, 1.3, 0.5, 0.0, 16, 16);
  CHECK_THROWS_AS(rellich_residual(w, v, q), GridMismatchError);
}

TEST_CASE("the interior-exterior inequality reports its sharp constant") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const FractionalOrder flat = make_order(0.5);
  const HalfSpaceField w = synth(g, flat, 4.0, 512, fields::axis, 0);
  const HalfSpaceField none = synth(g, flat, 4.0, 512, fields::zero, 0);
  const BallQuadrature q = make_ball_quadrature(pi, 1.3, 0.5, 0.0, 48, 64);

  // lhs = int (x-pi)^2 = pi r^4 / 4, rhs = r * int_dB (x-pi)^2 = pi r^4
  const InteriorExteriorResult res = interior_exterior_check(w, none, q);
  CHECK(res.lhs == doctest::Approx(pi * 0.0625 / 4.0).epsilon(1e-10));
  CHECK(res.c_empirical == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(res.c_empirical <= 1.0);

  const InteriorExteriorResult triv = interior_exterior_check(none, none, q);
  CHECK(triv.lhs == 0.0);
  CHECK(triv.c_empirical == 0.0);
}

TEST_CASE("volume and surface forms of D_k agree on genuine extensions") {
  const XGrid g = make_grid(1, 256, 2.0 * pi);
  const BoundaryFunction f = make_cosine(g, 1);
  {
    const Profile p = solve_profile_closed_form(make_order(1.5), 30.0, 2048);
    const HalfSpaceField u = extend(f, p);
    const BallQuadrature qi = make_ball_quadrature(pi, 1.0, 0.5, 0.0, 32, 64);
    CHECK(dk_boundary_identity_residual(u, qi, 0) < 1e-4);
    CHECK(dk_boundary_identity_residual(u, qi, 1) < 1e-4);
    const BallQuadrature qh = make_ball_quadrature(pi, 0.0, 0.5, 0.0, 48, 64);
    CHECK(dk_boundary_identity_residual(u, qh, 0) < 1e-4);

    // refinement in the truncation-dominated regime
    const BallQuadrature qc = make_ball_quadrature(pi, 1.0, 0.5, 0.0, 4, 8);
    const BallQuadrature qf = make_ball_quadrature(pi, 1.0, 0.5, 0.0, 8, 16);
    const double rc = dk_boundary_identity_residual(u, qc, 0);
    const double rf = dk_boundary_identity_residual(u, qf, 0);
    CHECK(rc / rf >= 4.0);

    CHECK_THROWS_AS(dk_boundary_identity_residual(u, qi, 2),
                    InsufficientGridError);
    CHECK_THROWS_AS(dk_boundary_identity_residual(u, qi, -1),
                    InsufficientGridError);
  }
  {
    const Profile p = solve_profile_closed_form(make_order(1.3), 30.0, 2048);
    const HalfSpaceField u = extend(f, p);
    const BallQuadrature qi = make_ball_quadrature(pi, 1.0, 0.5, 0.4, 32, 64);
    CHECK(dk_boundary_identity_residual(u, qi, 0) < 1e-4);
  }
}

TEST_CASE("a constant solution has zero D_k residual") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  auto one = [](double, double) { return 1.0; };
  const HalfSpaceField w = synth(g, make_order(0.5), 4.0, 512, one, 1);
  const BallQuadrature q = make_ball_quadrature(pi, 1.3, 0.5, 0.0, 16, 32);
  CHECK(dk_boundary_identity_residual(w, q, 0) < 1e-12);
}

TEST_CASE("scans order their radii and stay monotone for genuine extensions") {
  const XGrid g = make_grid(1, 256, 2.0 * pi);
  const Profile p = solve_profile_closed_form(make_order(1.5), 30.0, 1024);
  const HalfSpaceField u = extend(make_gaussian(g, 0.5), p);

  const FrequencyReport rep =
      frequency_scan(u, pi, 0.0, {0.9, 0.3, 0.6, 0.1, 0.45});
  REQUIRE(rep.radii.size() == 5);
  CHECK(std::is_sorted(rep.radii.begin(), rep.radii.end()));
  CHECK(rep.m == 1);
  CHECK(rep.b == doctest::Approx(0.0));

  CHECK(rep.lambda_estimate <= 50.0);
  CHECK(monotonicity_check(rep, rep.lambda_estimate).ok);
  CHECK(monotonicity_check(rep, 50.0).ok);
}

TEST_CASE("half-ball scans refuse fields whose odd traces do not vanish") {
  const XGrid g = make_grid(1, 256, 2.0 * pi);
  const Profile p = solve_profile_closed_form(make_order(1.5), 30.0, 1024);
  HalfSpaceField u = extend(make_gaussian(g, 0.5), p);
  for (std::size_t iy = 0; iy < u.levels(); ++iy) {
    const double y = u.y_grid[iy];
    for (std::size_t ix = 0; ix < u.stride(); ++ix)
      u.values()[iy * u.stride() + ix] += 0.05 * y * std::exp(-y);
  }
  CHECK_THROWS_AS(frequency_scan(u, pi, 0.0, {0.3, 0.5}),
                  QuadratureOutOfDomainError);
}

TEST_CASE("scan guards: radii, dimension, vanishing data, missing iterates") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const FractionalOrder flat = make_order(0.5);
  const HalfSpaceField w = synth(g, flat, 4.0, 512, fields::axis, 1);
  CHECK_THROWS_AS(frequency_scan(w, pi, 1.3, {0.3, -0.1}),
                  QuadratureOutOfDomainError);

  const HalfSpaceField none = synth(g, flat, 4.0, 512, fields::zero, 1);
  const BallQuadrature q = make_ball_quadrature(pi, 1.3, 0.5, 0.0, 16, 16);
  CHECK_THROWS_AS(compute_N(none, q), ZeroHError);

  // D/H/N need the full iterate ladder
  const HalfSpaceField bare =
      synth(g, make_order(1.3), 4.0, 512, fields::axis, 0);
  CHECK_THROWS_AS(compute_D(bare, make_ball_quadrature(pi, 1.3, 0.5, 0.4, 16, 16)),
                  InsufficientGridError);

  // two boundary dimensions are not scannable
  const XGrid g2 = make_grid(2, 16, 2.0 * pi);
  const Profile p2 = solve_profile_closed_form(flat, 30.0, 256);
  const HalfSpaceField u2 = extend(make_cosine(g2, 1), p2);
  CHECK_THROWS_AS(frequency_scan(u2, pi, 0.0, {0.3}),
                  UnsupportedDimensionError);
}

TEST_CASE("a trace with vanishing fractional operator on a window scans cleanly") {
  // Build f with (-Delta)^gamma f = h, h supported away from the window
  // I = [pi - 0.8, pi + 0.8]: divide the coefficients of h by |xi|^(2 gamma).
  const XGrid g = make_grid(1, 1024, 2.0 * pi);
  const auto ord = make_order(1.3);
  const BoundaryFunction lobe_a = make_gaussian(g, 0.15, 0.08);
  const BoundaryFunction lobe_b = make_gaussian(g, 0.15, 0.88);
  BoundaryFunction h{g, std::vector<double>(g.total_points())};
  for (std::size_t i = 0; i < h.values.size(); ++i)
    h.values[i] = lobe_a.values[i] - lobe_b.values[i];

  Spectrum s = dft_forward(h);
  for (std::size_t k = 0; k < s.coefficients.size(); ++k) {
    const double mag = s.frequency_magnitudes[k];
    if (mag > 0.0)
      s.coefficients[k] /= std::pow(mag, 2.0 * ord.gamma);
    else
      s.coefficients[k] = 0.0;
  }
  const BoundaryFunction f = dft_inverse(s);

  // the operator of f is h up to the dropped mean: small on the window,
  // order one outside it
  const BoundaryFunction applied = frac_laplacian_spectral(f, ord);
  double sup_window = 0.0, sup_all = 0.0;
  for (std::size_t i = 0; i < applied.values.size(); ++i) {
    const double v = std::fabs(applied.values[i]);
    sup_all = std::max(sup_all, v);
    if (std::fabs(g.coord(int(i)) - pi) <= 0.8)
      sup_window = std::max(sup_window, v);
  }
  CHECK(sup_all > 0.1);
  CHECK(sup_window < 1e-6 * sup_all);

  const Profile p = solve_profile_closed_form(ord, 30.0, 2048);
  const HalfSpaceField u = extend(f, p);
  std::vector<double> radii;
  for (int i = 0; i < 9; ++i) radii.push_back(0.1 + 0.1 * i);
  const FrequencyReport rep = frequency_scan(u, pi, 0.0, radii);

  for (double n : rep.N_values) {
    CHECK(n > 0.0);
    CHECK(n < 5.0);
  }
  CHECK(rep.lambda_estimate <= 50.0);
  CHECK(monotonicity_check(rep, rep.lambda_estimate).ok);
}

TEST_CASE("planted boundary zeros are recovered with their vanishing order") {
  const XGrid g = make_grid(1, 4096, 2.0 * pi);
  std::vector<double> radii;
  for (int i = 0; i < 8; ++i) radii.push_back(0.4 * std::pow(2.0, -0.5 * i));

  BoundaryFunction f{g, std::vector<double>(g.total_points())};
  const double orders[3] = {1.0, 2.0, 4.0};
  for (int which = 0; which < 3; ++which) {
    for (int i = 0; i < g.points_per_axis; ++i) {
      const double t = g.coord(i) - pi;
      f.values[i] = which == 0 ? 1.0 : which == 1 ? t : t * t * t;
    }
    CHECK(vanishing_order(f, pi, radii) ==
          doctest::Approx(orders[which]).epsilon(0.2 / orders[which]));
  }
}

TEST_CASE("vanishing order estimation needs at least three usable radii") {
  const XGrid g = make_grid(1, 1024, 2.0 * pi);
  const BoundaryFunction f = make_cosine(g, 1);
  CHECK_THROWS_AS(vanishing_order(f, pi, {10.0, 20.0, 30.0}),
                  InsufficientRadiiError);
  CHECK_THROWS_AS(vanishing_order(f, pi, {0.1, 0.2}), InsufficientRadiiError);
}

TEST_CASE("frequency CSV export has the documented shape") {
  const XGrid g = make_grid(1, 512, 2.0 * pi);
  const HalfSpaceField w = synth(g, make_order(0.5), 4.0, 512, fields::axis, 1);
  const FrequencyReport rep = frequency_scan(w, pi, 1.3, {0.3, 0.5, 0.7});
  std::ostringstream out;
  write_frequency_csv(rep, out);
  std::istringstream in(out.str());
  std::string header;
  REQUIRE(std::getline(in, header));
  CHECK(header == "radius,D,H,N");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
}
