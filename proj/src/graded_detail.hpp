// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0
//
// Internal helpers shared by the profile and field translation units:
// the graded half-line mesh, its five-point stencils, and the head-fit
// basis used to read branch coefficients near y = 0. Not installed.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <vector>

namespace fraclab::detail {

// Graded mesh y_i = y_max (i/n)^2; uniform in the auxiliary variable
// s = sqrt(y/y_max), which is what the stencils differentiate in.
inline std::vector<double> graded_nodes(double y_max, int n) {
  std::vector<double> y(n + 1);
  for (int j = 0; j <= n; ++j) {
    const double s = static_cast<double>(j) / n;
    y[j] = y_max * s * s;
  }
  return y;
}

// Branch basis g(y) = (y^sigma - y^2)/(sigma - 2), the non-even head term
// normalized to stay well-conditioned as sigma -> 2 (limit y^2 log y).
inline double branch_g(double y, double sigma) {
  if (y == 0.0) return 0.0;
  return y * y * std::expm1((sigma - 2.0) * std::log(y)) / (sigma - 2.0);
}

// 5-point stencils on the uniform s-mesh; interior nodes are central,
// the two nodes flanking each end use the offset forms, the last node the
// fully one-sided ones. Node 0 is handled by head fits, never here.
inline void stencil_at(int i, int n, double h, int& first,
                       std::array<double, 5>& d1, std::array<double, 5>& d2) {
  if (i == 1) {
    first = 0;
    d1 = {-3, -10, 18, -6, 1};
    d2 = {11, -20, 6, 4, -1};
  } else if (i == n - 1) {
    first = n - 4;
    d1 = {-1, 6, -18, 10, 3};
    d2 = {-1, 4, 6, -20, 11};
  } else if (i == n) {
    first = n - 4;
    d1 = {3, -16, 36, -48, 25};
    d2 = {11, -56, 114, -104, 35};
  } else {
    first = i - 2;
    d1 = {1, -8, 0, 8, -1};
    d2 = {-1, 16, -30, 16, -1};
  }
  for (auto& c : d1) c /= 12.0 * h;
  for (auto& c : d2) c /= 12.0 * h * h;
}

// Weights w with sum_i w_i u(y_i) = coefficient of g in the head fit of u
// through nodes y[0..use-1] against {1, y^2, g} (use = 3) or
// {1, y^2, g, y^2 g} (use = 4), in natural units. Columns are scaled to
// O(1) before inverting, and the scale is folded back into the weights.
inline std::vector<double> head_branch_weights(const std::vector<double>& y,
                                               double sigma, int use) {
  Eigen::MatrixXd M(use, use);
  const double yt = y[use - 1];
  const double st = yt * yt;
  const double gt = branch_g(yt, sigma);
  for (int i = 0; i < use; ++i) {
    const double gi = branch_g(y[i], sigma);
    M(i, 0) = 1.0;
    M(i, 1) = y[i] * y[i] / st;
    M(i, 2) = gi / gt;
    if (use > 3) M(i, 3) = (y[i] * y[i] * gi) / (st * gt);
  }
  Eigen::VectorXd e = Eigen::VectorXd::Zero(use);
  e(2) = 1.0;
  Eigen::VectorXd w = M.transpose().fullPivLu().solve(e);
  std::vector<double> out(use);
  for (int i = 0; i < use; ++i) out[i] = w(i) / gt;
  return out;
}

// The first mesh cells cannot be differenced in s: the chain rule divides
// by s^2 and promotes any stencil truncation of a y^q branch term to O(1).
// Near y = 0 every grid function of interest is a Frobenius series on the
// merged exponent ladders {0, 2, 4, ...} and {q, q+2, ...}, so the head
// functionals below fit the four lowest ladder terms through four
// spread-out nodes and apply the requested operator to that model instead
// of to the grid. The spread (up to every eighth node) keeps the weight
// magnitudes far from the roundoff floor and lifts the branch signature
// above value noise. A branch exponent too close to an even power is
// indistinguishable from it at the fit scale and is replaced by the next
// even ladder term.
inline double resolved_branch_exponent(double q) {
  if (q < 0.05 || std::abs(q - 2.0) < 0.05 || std::abs(q - 4.0) < 0.05)
    return 6.0;
  return q;
}

struct HeadModel {
  std::array<int, 4> support;            // grid indices the weights act on
  std::array<double, 4> exponent;        // ladder powers the fit spans
  double scale = 0.0;                    // y of the outermost support node
  int eval_count = 0;                    // rows are valid for nodes < this
  Eigen::FullPivLU<Eigen::Matrix4d> lu;  // factored transpose of the fit
};

inline HeadModel head_model(const std::vector<double>& y, double q) {
  HeadModel hm;
  const int n = static_cast<int>(y.size()) - 1;
  // Stride grows with resolution so the fit window stays at a fixed
  // physical depth (~5e-3 of the domain). A fixed-index window would
  // shrink like n^-2 and its weights would grow like n^4, amplifying
  // value roundoff until refinement stops improving the head rows.
  const int s = std::max(1, n / 256);
  hm.support = {0, s, 2 * s, 3 * s};
  hm.eval_count = std::min(3 * s, std::min(8, n));
  const double qq = resolved_branch_exponent(q);
  double even = 0.0, branch = qq;
  for (int j = 0; j < 4; ++j) {
    if (even < branch) {
      hm.exponent[j] = even;
      even += 2.0;
    } else {
      hm.exponent[j] = branch;
      branch += 2.0;
    }
  }
  hm.scale = y[hm.support[3]];
  Eigen::Matrix4d M;
  for (int r = 0; r < 4; ++r) {
    const double t = y[hm.support[r]] / hm.scale;
    for (int c = 0; c < 4; ++c)
      M(r, c) = hm.exponent[c] == 0.0
                    ? 1.0
                    : (r == 0 ? 0.0 : std::pow(t, hm.exponent[c]));
  }
  hm.lu.compute(M.transpose());
  return hm;
}

// Weight row sending u at the support nodes to u'' + (w/y) u' at y_t.
// Each ladder power maps to p(p-1+w) y^(p-2); at y_t = 0 that leaves the
// series limit (1+w)·u''(0) from p = 2, zero from p > 2, and for a
// sub-y^2 branch whatever the pairing dictates: every operator/branch
// pairing the callers use annihilates it (p-1+w = 0 up to roundoff), and
// under any other weight there is no finite limit to report, so the image
// is dropped and the row returns the even-part limit.
inline std::array<double, 4> head_operator_row(const HeadModel& hm, double w,
                                               double y_t) {
  Eigen::Vector4d img;
  for (int c = 0; c < 4; ++c) {
    const double p = hm.exponent[c];
    const double cim = p * (p - 1.0 + w);
    if (std::abs(cim) <= 1e-10 * (p + std::abs(w) + 1.0))
      img(c) = 0.0;
    else if (y_t == 0.0)
      img(c) = p == 2.0 ? cim / (hm.scale * hm.scale) : 0.0;
    else
      img(c) = cim * std::pow(y_t, p - 2.0) / std::pow(hm.scale, p);
  }
  const Eigen::Vector4d r = hm.lu.solve(img);
  return {r(0), r(1), r(2), r(3)};
}

// Weight rows for u'(y_t) and u''(y_t) from the same model; y_t > 0.
inline void head_derivative_rows(const HeadModel& hm, double y_t,
                                 std::array<double, 4>& d1,
                                 std::array<double, 4>& d2) {
  Eigen::Vector4d i1, i2;
  for (int c = 0; c < 4; ++c) {
    const double p = hm.exponent[c];
    if (p == 0.0) {
      i1(c) = 0.0;
      i2(c) = 0.0;
      continue;
    }
    const double Yp = std::pow(hm.scale, p);
    i1(c) = p * std::pow(y_t, p - 1.0) / Yp;
    i2(c) = p * (p - 1.0) * std::pow(y_t, p - 2.0) / Yp;
  }
  const Eigen::Vector4d r1 = hm.lu.solve(i1);
  const Eigen::Vector4d r2 = hm.lu.solve(i2);
  for (int j = 0; j < 4; ++j) {
    d1[j] = r1(j);
    d2[j] = r2(j);
  }
}

}  // namespace fraclab::detail
