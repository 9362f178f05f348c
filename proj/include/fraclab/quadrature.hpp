// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace fraclab {

// Nodes/weights of an n-point rule, by default on the reference interval
// [-1, 1]; map_to_interval produces the affinely transplanted rule.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

QuadRule gauss_legendre(int n);

// Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1,1],
// alpha, beta > -1. Built by Golub-Welsch on the Jacobi recurrence.
QuadRule gauss_jacobi(int n, double alpha, double beta);

QuadRule map_to_interval(const QuadRule& reference, double a, double b);

// integral of y^b * F(y) over [0, y_max] from samples of F on the graded
// mesh y_i = y_max * (i/n)^2, i = 0..n (n even). Quadratic panels in the
// uniform variable s = sqrt(y/y_max) against exact moments of s^(2b+1),
// so the endpoint weight singularity/degeneracy costs no accuracy.
double graded_simpson_yb(const std::vector<double>& f, double y_max, double b);

// Variant of graded_simpson_yb for integrands behaving like s^e near the
// origin with non-even e (possibly negative, e > -2b-2): the first two
// cells are fitted with the basis {1, s^e, s^2} through nodes 1..3 (node
// 0 is never evaluated, it may be infinite) and integrated against exact
// moments; the remaining panels are standard. Falls back to the plain
// rule when e is indistinguishable from an even power.
double graded_simpson_yb_head(const std::vector<double>& f, double y_max,
                              double b, double head_s_exponent);

// integral of y^p * (piecewise-linear interpolant of f over nodes y) over
// [lo, hi] clipped to the node range. Cells are integrated with exact
// moments of y^p, so p may be negative (lo must then be positive).
double clipped_weighted_trapezoid(const std::vector<double>& y,
                                  const std::vector<double>& f, double p,
                                  double lo, double hi);

}  // namespace fraclab
