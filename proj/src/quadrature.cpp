// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

// Golub-Welsch: eigen-decompose the symmetric tridiagonal matrix built from
// the three-term recurrence of the orthogonal polynomials; eigenvalues are
// the nodes, mu0 * (first eigenvector component)^2 the weights.
QuadRule golub_welsch(const std::vector<double>& diag,
                      const std::vector<double>& offdiag, double mu0) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = diag[i];
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success)
    throw SingularSystemError("quadrature eigensolve failed");
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.weights[i] = mu0 * v0 * v0;
  }
  return r;
}

// integral of y^e over [a, b]; the e = -1 antiderivative is the log.
double power_moment(double a, double b, double e) {
  if (std::abs(e + 1.0) < 1e-12) return std::log(b / a);
  return (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
}

}  // namespace

QuadRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

QuadRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw QuadratureOutOfDomainError("rule needs at least one node");
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw QuadratureOutOfDomainError("Jacobi exponents must exceed -1");
  const double mu0 = std::exp2(alpha + beta + 1.0) *
                     std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(alpha + beta + 2.0));
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  diag[0] = (beta - alpha) / (alpha + beta + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + alpha + beta;
    diag[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    const double bk = 4.0 * k * (k + alpha) * (k + beta) * (k + alpha + beta) /
                      (s * s * (s + 1.0) * (s - 1.0));
    off[k - 1] = std::sqrt(bk);
  }
  return golub_welsch(diag, off, mu0);
}

QuadRule map_to_interval(const QuadRule& reference, double a, double b) {
  QuadRule r = reference;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (auto& x : r.nodes) x = mid + half * x;
  for (auto& w : r.weights) w *= half;
  return r;
}

double graded_simpson_yb(const std::vector<double>& f, double y_max, double b) {
  const std::size_t n = f.size() - 1;
  if (f.size() < 3 || n % 2 != 0)
    throw GridMismatchError("graded_simpson_yb needs an even interval count");
  if (!(b > -1.0) || !(b < 1.0))
    throw QuadratureOutOfDomainError("weight exponent must lie in (-1, 1)");
  const double hs = 1.0 / static_cast<double>(n);
  const double q = 2.0 * b + 1.0;  // s-space weight exponent, > -1
  double acc = 0.0;
  for (std::size_t j = 0; j + 2 <= n; j += 2) {
    const double s0 = j * hs, s1 = s0 + hs, s2 = s0 + 2.0 * hs;
    // exact moments of s^q against 1, s, s^2 over the panel
    const double m0 = power_moment(s0, s2, q);
    const double m1 = power_moment(s0, s2, q + 1.0);
    const double m2 = power_moment(s0, s2, q + 2.0);
    // Lagrange quadratics on the equispaced triple (s0, s1, s2)
    const double h2 = 2.0 * hs * hs;
    const double w0 = ((s1 * s2) * m0 - (s1 + s2) * m1 + m2) / h2;
    const double w1 = -((s0 * s2) * m0 - (s0 + s2) * m1 + m2) / (h2 / 2.0);
    const double w2 = ((s0 * s1) * m0 - (s0 + s1) * m1 + m2) / h2;
    acc += w0 * f[j] + w1 * f[j + 1] + w2 * f[j + 2];
  }
  return 2.0 * std::pow(y_max, b + 1.0) * acc;
}

double graded_simpson_yb_head(const std::vector<double>& f, double y_max,
                              double b, double head_s_exponent) {
  const double e = head_s_exponent;
  if (std::abs(e) < 1e-9 || std::abs(e - 2.0) < 1e-9)
    return graded_simpson_yb(f, y_max, b);
  const std::size_t n = f.size() - 1;
  if (f.size() < 5 || n % 2 != 0)
    throw GridMismatchError("graded_simpson_yb_head needs >=4 even intervals");
  if (!(b > -1.0) || !(b < 1.0))
    throw QuadratureOutOfDomainError("weight exponent must lie in (-1, 1)");
  const double q = 2.0 * b + 1.0;
  if (!(q + e > -1.0 + 1e-12))
    throw QuadratureDivergenceError("head exponent makes the integral diverge");
  const double hs = 1.0 / static_cast<double>(n);

  // Fit c0 + c1 s^e + c2 s^2 through nodes 1..3 (node 0 is excluded: the
  // sample there may be infinite when e < 0). Columns are scaled by their
  // value at the outermost node to keep the solve well conditioned.
  const double st = 3.0 * hs;
  Eigen::Matrix3d M;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    const double s = (i + 1) * hs;
    M(i, 0) = 1.0;
    M(i, 1) = std::pow(s / st, e);
    M(i, 2) = (s / st) * (s / st);
    rhs(i) = f[i + 1];
  }
  const Eigen::Vector3d c = M.fullPivLu().solve(rhs);
  const double s2 = 2.0 * hs;
  double acc = c(0) * power_moment(0.0, s2, q) +
               c(1) * power_moment(0.0, s2, q + e) / std::pow(st, e) +
               c(2) * power_moment(0.0, s2, q + 2.0) / (st * st);

  for (std::size_t j = 2; j + 2 <= n; j += 2) {
    const double s0 = j * hs, s1 = s0 + hs, sr = s0 + 2.0 * hs;
    const double m0 = power_moment(s0, sr, q);
    const double m1 = power_moment(s0, sr, q + 1.0);
    const double m2 = power_moment(s0, sr, q + 2.0);
    const double h2 = 2.0 * hs * hs;
    const double w0 = ((s1 * sr) * m0 - (s1 + sr) * m1 + m2) / h2;
    const double w1 = -((s0 * sr) * m0 - (s0 + sr) * m1 + m2) / (h2 / 2.0);
    const double w2 = ((s0 * s1) * m0 - (s0 + s1) * m1 + m2) / h2;
    acc += w0 * f[j] + w1 * f[j + 1] + w2 * f[j + 2];
  }
  return 2.0 * std::pow(y_max, b + 1.0) * acc;
}

double clipped_weighted_trapezoid(const std::vector<double>& y,
                                  const std::vector<double>& f, double p,
                                  double lo, double hi) {
  if (y.size() != f.size() || y.size() < 2)
    throw GridMismatchError("clipped_weighted_trapezoid: node/sample mismatch");
  lo = std::max(lo, y.front());
  hi = std::min(hi, y.back());
  if (!(hi > lo)) return 0.0;
  if (p <= -1.0 && !(lo > 0.0))
    throw QuadratureDivergenceError(
        "non-integrable weight needs a positive lower limit");
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    const double a = std::max(lo, y[i]);
    const double c = std::min(hi, y[i + 1]);
    if (!(c > a)) continue;
    // linear interpolant f(t) = alpha + beta t on the cell, exact moments
    const double beta = (f[i + 1] - f[i]) / (y[i + 1] - y[i]);
    const double alpha = f[i] - beta * y[i];
    acc += alpha * power_moment(a, c, p) + beta * power_moment(a, c, p + 1.0);
  }
  return acc;
}

}  // namespace fraclab
