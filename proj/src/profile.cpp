// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/profile.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "fraclab/bessel.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"
#include "graded_detail.hpp"

namespace fraclab {
namespace {

using detail::branch_g;
using detail::graded_nodes;
using detail::stencil_at;

constexpr double kInf = std::numeric_limits<double>::infinity();

// y^p K_nu(y) for y > 0 with the envelope evaluated in log space; the
// product underflows to 0 long after exp(-y) alone would.
double ypow_K(double p, double nu, double y) {
  const double log_env = p * std::log(y) - y;
  if (log_env < -740.0) return 0.0;
  return std::exp(log_env) * scaled_bessel_k(nu, y);
}

struct HeadFit {
  double a0 = 0.0;  // constant
  double c2 = 0.0;  // y^2
  double pg = 0.0;  // g(y)
  double ph = 0.0;  // y^2 g(y)
};

// Square fit of the head expansion through the first `use` nodes
// (use = 3 drops the y^2 g column). Columns are scaled to O(1).
HeadFit fit_head(const std::vector<double>& y, const std::vector<double>& v,
                 double sigma, int use) {
  Eigen::MatrixXd M(use, use);
  Eigen::VectorXd rhs(use);
  const double yt = y[use - 1];
  const double st = yt * yt;
  const double gt = branch_g(yt, sigma);
  for (int i = 0; i < use; ++i) {
    const double gi = branch_g(y[i], sigma);
    M(i, 0) = 1.0;
    M(i, 1) = y[i] * y[i] / st;
    M(i, 2) = gi / gt;
    if (use > 3) M(i, 3) = (y[i] * y[i] * gi) / (st * gt);
    rhs(i) = v[i];
  }
  Eigen::VectorXd c = M.fullPivLu().solve(rhs);
  HeadFit f;
  f.a0 = c(0);
  f.c2 = c(1) / st;
  f.pg = c(2) / gt;
  if (use > 3) f.ph = c(3) / (st * gt);
  return f;
}

// Weights w with sum_i w_i u(y_i) = (coefficient of g in the 3-node head
// fit of u); setting that to zero removes the y^sigma branch.
std::array<double, 3> branch_kill_weights(const std::vector<double>& y,
                                          double sigma) {
  const std::vector<double> w = detail::head_branch_weights(y, sigma, 3);
  return {w[0], w[1], w[2]};
}

// y->0 limits of u' and u'' from the fitted head expansion. The branch
// term y^sigma (sigma in (0,2)) makes these infinite for some orders;
// we store the true limit, infinities included.
void head_limits(const HeadFit& f, double sigma, bool branch_allowed,
                 double& d1, double& d2) {
  if (!branch_allowed || f.pg == 0.0) {
    d1 = 0.0;
    d2 = 2.0 * f.c2;
    return;
  }
  if (std::abs(sigma - 1.0) <= 1e-12) {
    d1 = f.pg / (sigma - 2.0);
    d2 = 2.0 * f.c2 + 2.0 * f.pg;
  } else if (sigma > 1.0) {
    d1 = 0.0;
    d2 = std::copysign(kInf, -f.pg);
  } else {
    d1 = std::copysign(kInf, -f.pg);
    d2 = std::copysign(kInf, f.pg);
  }
}

// Operator-fitted 5-point row for L_s u = u_ss + ((2b-1)/s) u_s at node
// i, exact on the head basis {1, s^2, s^4, s^(2 sigma), s^(2 sigma+2)}
// (kernel of L_s plus its first even lifts). Polynomial stencils carry an
// O(1) relative error on the fractional branch at the first couple of
// nodes, which poisons every boundary fit downstream; these rows keep the
// branch exact. Degenerate when s^(2 sigma) collides with an even power,
// so callers fall back to polynomial stencils near sigma = 0, 1, 2.
std::array<double, 5> branch_fitted_row(int i, double h, double b,
                                        double sigma) {
  const double twos = 2.0 * sigma;
  const double si = i * h;
  const double s4 = 4.0 * h;
  Eigen::Matrix<double, 5, 5> A;
  Eigen::Matrix<double, 5, 1> r;
  for (int j = 0; j < 5; ++j) {
    const double q = static_cast<double>(j) / 4.0;  // s_j / s_4
    A(j, 0) = 1.0;
    A(j, 1) = q * q;
    A(j, 2) = q * q * q * q;
    A(j, 3) = j == 0 ? 0.0 : std::pow(q, twos);
    A(j, 4) = j == 0 ? 0.0 : std::pow(q, twos + 2.0);
  }
  r(0) = 0.0;
  r(1) = 4.0 * b / (s4 * s4);
  r(2) = (8.0 + 8.0 * b) * si * si / (s4 * s4 * s4 * s4);
  r(3) = 0.0;
  r(4) = (4.0 * sigma + 4.0) * std::pow(si / s4, twos) / (s4 * s4);
  const Eigen::Matrix<double, 5, 1> w = A.transpose().fullPivLu().solve(r);
  return {w(0), w(1), w(2), w(3), w(4)};
}

// Ratio psi_k(yb)/psi_k(ya) for large arguments from the two-term
// Macdonald asymptotics; amplitude-free, so usable as a tail closure.
double tail_ratio(const FractionalOrder& ord, int k, double ya, double yb) {
  const double nu = ord.gamma - k;
  const double mu = 4.0 * nu * nu;
  const double c1 = (mu - 1.0) / 8.0;
  const double c2 = (mu - 1.0) * (mu - 9.0) / 128.0;
  auto corr = [&](double y) { return 1.0 + c1 / y + c2 / (y * y); };
  return std::pow(yb / ya, nu - 0.5) * std::exp(-(yb - ya)) * corr(yb) / corr(ya);
}

// First/second y-derivatives of a grid function from s-space stencils;
// node 0 entries are left for the caller (chain rule degenerates there).
// The first three interior nodes come from the branch-aware head model
// for the given y^branch_q term instead -- the 1/s^2 chain-rule factor
// makes raw stencils useless against a fractional branch there.
void fd_derivatives(const std::vector<double>& u, double y_max,
                    std::vector<double>& dy, std::vector<double>& dyy,
                    double branch_q) {
  const int n = static_cast<int>(u.size()) - 1;
  const double h = 1.0 / n;
  dy.assign(n + 1, 0.0);
  dyy.assign(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    int first;
    std::array<double, 5> d1, d2;
    stencil_at(i, n, h, first, d1, d2);
    double us = 0.0, uss = 0.0;
    for (int j = 0; j < 5; ++j) {
      us += d1[j] * u[first + j];
      uss += d2[j] * u[first + j];
    }
    const double s = i * h;
    dy[i] = us / (2.0 * y_max * s);
    dyy[i] = (uss - us / s) / (4.0 * y_max * y_max * s * s);
  }
  const detail::HeadModel hm = detail::head_model(graded_nodes(y_max, n), branch_q);
  for (int i = 1; i < std::min(hm.eval_count, n); ++i) {
    std::array<double, 4> w1, w2;
    detail::head_derivative_rows(hm, y_max * (i * h) * (i * h), w1, w2);
    double a1 = 0.0, a2 = 0.0;
    for (int j = 0; j < 4; ++j) {
      a1 += w1[j] * u[hm.support[j]];
      a2 += w2[j] * u[hm.support[j]];
    }
    dy[i] = a1;
    dyy[i] = a2;
  }
}

// Fill node-0 derivative limits and J/neumann bookkeeping shared by both
// construction routes.
void finish_profile(Profile& p) {
  const int m = p.ord.m;
  const double sigma = 1.0 - p.ord.b;
  for (int k = 0; k <= m; ++k) {
    HeadFit f = fit_head(p.y_grid, p.cascade[k], sigma, 4);
    head_limits(f, sigma, /*branch_allowed=*/k == m, p.cascade_dy[k][0],
                p.cascade_dyy[k][0]);
  }
  neumann_constant(p);
  profile_energy_J(p);
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

Profile solve_profile_closed_form(const FractionalOrder& ord, double y_max,
                                  int n_intervals) {
  if (!(y_max > 0.0) || n_intervals < 8 || n_intervals % 2 != 0)
    throw GridMismatchError("profile grid needs y_max > 0 and an even node count");
  const int m = ord.m;
  const int n = n_intervals;
  Profile p;
  p.ord = ord;
  p.y_max = y_max;
  p.route = ProfileRoute::closed_form;
  p.y_grid = graded_nodes(y_max, n);
  p.cascade.assign(m + 1, std::vector<double>(n + 1));
  p.cascade_dy.assign(m + 1, std::vector<double>(n + 1));
  p.cascade_dyy.assign(m + 1, std::vector<double>(n + 1));

  const double norm = std::exp2(ord.gamma - 1.0) * std::tgamma(ord.gamma);
  double Ck = 1.0;
  for (int k = 0; k <= m; ++k) {
    const double nu = ord.gamma - k;
    auto& v = p.cascade[k];
    auto& d1 = p.cascade_dy[k];
    auto& d2 = p.cascade_dyy[k];
    v[0] = Ck * std::exp2(nu - 1.0) * std::tgamma(nu) / norm;
    for (int j = 1; j <= n; ++j) {
      const double y = p.y_grid[j];
      v[j] = Ck * ypow_K(nu, nu, y) / norm;
      d1[j] = -Ck * ypow_K(nu, nu - 1.0, y) / norm;
      d2[j] = -Ck * (ypow_K(nu - 1.0, nu - 1.0, y) - ypow_K(nu, nu - 2.0, y)) / norm;
    }
    Ck *= -2.0 * (m - k);  // next cascade amplitude
  }
  finish_profile(p);
  return p;
}

Profile solve_profile_bvp(const FractionalOrder& ord, double y_max,
                          int n_intervals) {
  if (!(y_max >= 20.0))
    throw GridMismatchError("bvp solve expects y_max >= 20");
  if (n_intervals < 256 || n_intervals % 2 != 0)
    throw GridMismatchError("bvp solve expects an even interval count >= 256");

  const int m = ord.m;
  const int comps = m + 1;
  const int n = n_intervals;
  const double Y = y_max;
  const double b = ord.b;
  const double h = 1.0 / n;
  const std::vector<double> y = graded_nodes(Y, n);
  const double sigma = 1.0 - b;
  auto idx = [comps](int i, int k) { return i * comps + k; };
  const int dim = (n + 1) * comps;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(dim) * 7);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);

  // node 0: Dirichlet on phi plus one branch-kill row per cascade member
  // below the top; the top member keeps its branch (it carries the
  // weighted Neumann data).
  trips.emplace_back(idx(0, 0), idx(0, 0), 1.0);
  rhs(idx(0, 0)) = 1.0;
  if (m > 0) {
    const std::array<double, 3> kw = branch_kill_weights(y, sigma);
    for (int c = 1; c <= m; ++c)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(idx(0, c), idx(j, c - 1), kw[j]);
  }

  // interior rows: the cascade system in s-coordinates,
  // u_ss + ((2b-1)/s) u_s - 4 Y^2 s^2 (psi_k + psi_{k+1}) = 0.
  // The two rows nearest the boundary switch to branch-fitted weights
  // whenever the fractional branch is distinguishable from even powers.
  const bool fit_branch_rows =
      std::abs(sigma - 1.0) > 0.025 && sigma > 0.025 && sigma < 1.975;
  for (int i = 1; i <= n - 1; ++i) {
    const double s = i * h;
    const double w = 4.0 * Y * Y * s * s;
    int first;
    std::array<double, 5> op_row;
    if (fit_branch_rows && i <= 2) {
      first = 0;
      op_row = branch_fitted_row(i, h, b, sigma);
    } else {
      const double cs = (2.0 * b - 1.0) / s;
      std::array<double, 5> d1, d2;
      stencil_at(i, n, h, first, d1, d2);
      for (int j = 0; j < 5; ++j) op_row[j] = d2[j] + cs * d1[j];
    }
    for (int k = 0; k <= m; ++k) {
      const int r = idx(i, k);
      for (int j = 0; j < 5; ++j)
        trips.emplace_back(r, idx(first + j, k), op_row[j]);
      trips.emplace_back(r, idx(i, k), -w);
      if (k < m) trips.emplace_back(r, idx(i, k + 1), -w);
    }
  }

  // tail rows: pin the ratio of the last two nodes to the asymptotic
  // decay, amplitude-free.
  for (int k = 0; k <= m; ++k) {
    const int r = idx(n, k);
    trips.emplace_back(r, idx(n, k), 1.0);
    trips.emplace_back(r, idx(n - 1, k), -tail_ratio(ord, k, y[n - 1], y[n]));
  }

  // row equilibration keeps the LU pivoting honest across the very
  // different row scales (stencil rows ~ n^2, constraint rows ~ 1).
  std::vector<double> row_max(dim, 0.0);
  for (const auto& t : trips)
    row_max[t.row()] = std::max(row_max[t.row()], std::abs(t.value()));
  for (auto& t : trips)
    t = Eigen::Triplet<double>(t.row(), t.col(), t.value() / row_max[t.row()]);
  for (int r = 0; r < dim; ++r) rhs(r) /= row_max[r];

  Eigen::SparseMatrix<double> A(dim, dim);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("profile system factorization failed");
  Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success)
    throw SingularSystemError("profile system solve failed");

  Profile p;
  p.ord = ord;
  p.y_max = Y;
  p.route = ProfileRoute::bvp;
  p.y_grid = y;
  p.cascade.assign(comps, std::vector<double>(n + 1));
  p.cascade_dy.assign(comps, std::vector<double>(n + 1));
  p.cascade_dyy.assign(comps, std::vector<double>(n + 1));
  for (int i = 0; i <= n; ++i)
    for (int k = 0; k <= m; ++k) p.cascade[k][i] = sol(idx(i, k));
  p.cascade[0][0] = 1.0;

  // decay sanity on the tail half before trusting anything downstream
  for (int i = n / 2; i <= n; ++i) {
    const double bound = 1e3 * std::pow(1.0 + y[i], m) * std::exp(-y[i]);
    if (std::abs(p.cascade[0][i]) > bound)
      throw NonDecayingError("profile tail exceeds the decay envelope at y=" +
                             std::to_string(y[i]));
  }

  for (int k = 0; k <= m; ++k)
    fd_derivatives(p.cascade[k], Y, p.cascade_dy[k], p.cascade_dyy[k],
                   2.0 * ord.gamma - 2.0 * k);
  finish_profile(p);
  return p;
}

double profile_energy_J(Profile& p) {
  const int m = p.ord.m;
  const double b = p.ord.b;
  const double gamma = p.ord.gamma;
  const int K = (m + 1) / 2;
  const int n = static_cast<int>(p.nodes()) - 1;
  const bool even_case = m % 2 == 0;

  std::vector<double> F(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double v = p.cascade[K][i];
    F[i] = even_case ? v * v + p.cascade_dy[K][i] * p.cascade_dy[K][i] : v * v;
  }

  // decay guard: the weighted integrand must be negligible at the tail.
  double head_max = 0.0, tail_max = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double w = std::pow(p.y_grid[i], b) * std::abs(F[i]);
    head_max = std::max(head_max, w);
    if (i >= n - n / 10) tail_max = std::max(tail_max, w);
  }
  if (tail_max > 1e-8 * head_max)
    throw QuadratureDivergenceError("profile energy integrand does not decay");

  // m = 0 with gamma < 7/8: phi'^2 behaves like s^(8 gamma - 4) near 0
  // (unbounded below gamma = 1/2), so the head cells need the fitted
  // singular basis instead of a quadratic panel.
  const double sf = 8.0 * gamma - 4.0;  // s-exponent of the m=0 gradient term
  const double J = (m == 0 && sf < 3.0 - 1e-9)
                       ? graded_simpson_yb_head(F, p.y_max, b, sf)
                       : graded_simpson_yb(F, p.y_max, b);
  p.J_value = J;
  return J;
}

double neumann_constant(Profile& p) {
  const int m = p.ord.m;
  const double sigma = 1.0 - p.ord.b;
  const HeadFit f4 = fit_head(p.y_grid, p.cascade[m], sigma, 4);
  const HeadFit f3 = fit_head(p.y_grid, p.cascade[m], sigma, 3);
  const double c4 = sigma * f4.pg / (sigma - 2.0);
  const double c3 = sigma * f3.pg / (sigma - 2.0);
  if (std::abs(c4 - c3) > 1e-3 * std::max(1.0, std::abs(c4)))
    throw ExtrapolationUnstableError(
        "head fits disagree: " + std::to_string(c3) + " vs " + std::to_string(c4));
  p.neumann_c = c4;
  return c4;
}

std::vector<BoundaryDerivativeRow> boundary_derivative_table(const Profile& p) {
  const int m = p.ord.m;
  const double gamma = p.ord.gamma;
  const double sigma = 1.0 - p.ord.b;
  const int kmax = m / 2;  // rows cover even orders 2k <= m

  // head fit with enough even powers to read off phi^(2k)(0), plus the
  // two leading branch columns so they do not alias into the even ones.
  const int K = std::max(2, m / 2 + 1);
  const int cols = K + 3;
  Eigen::MatrixXd M(cols, cols);
  Eigen::VectorXd rhs(cols);
  const double yt = p.y_grid[cols - 1];
  const double gt = branch_g(yt, sigma);
  for (int i = 0; i < cols; ++i) {
    const double yi = p.y_grid[i];
    for (int j = 0; j <= K; ++j)
      M(i, j) = std::pow(yi / yt, 2.0 * j);
    const double gi = branch_g(yi, sigma);
    M(i, K + 1) = gi / gt;
    M(i, K + 2) = (yi * yi * gi) / (yt * yt * gt);
    rhs(i) = p.phi()[i];
  }
  Eigen::VectorXd c = M.fullPivLu().solve(rhs);

  std::vector<BoundaryDerivativeRow> rows;
  double ck = 1.0;       // Frobenius coefficient c_k
  double prod = 1.0;     // running product over 1/(2 gamma - 4(j-1))
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) {
      ck /= 4.0 * k * (k - gamma);
      prod *= -1.0 / (2.0 * gamma - 4.0 * (k - 1));
    }
    BoundaryDerivativeRow row;
    row.k = k;
    row.measured = factorial(2 * k) * c(k) / std::pow(yt, 2.0 * k);
    row.theorem_product = prod;
    row.frobenius = factorial(2 * k) * ck;
    row.discrepant =
        std::abs(row.theorem_product - row.frobenius) >
        1e-9 * std::max(1.0, std::abs(row.frobenius));
    rows.push_back(row);
  }
  return rows;
}

double cascade_residual_profile(const Profile& p, int k) {
  if (k < 0 || k > p.ord.m)
    throw GridMismatchError("cascade index out of range");
  const double w = p.ord.a + 2.0 * k;
  const int n = static_cast<int>(p.nodes()) - 1;
  double acc = 0.0;
  for (int i = 1; i <= n - 1; ++i) {
    const double y = p.y_grid[i];
    const double r = p.cascade_dyy[k][i] + (w / y) * p.cascade_dy[k][i] -
                     p.cascade[k][i];
    acc += r * r;
  }
  return std::sqrt(acc / (n - 1));
}

double eval_cascade(const Profile& p, int k, double y) {
  if (k < 0 || k > p.ord.m)
    throw GridMismatchError("cascade index out of range");
  if (!(y >= 0.0)) throw GridMismatchError("cascade evaluation needs y >= 0");
  if (p.route == ProfileRoute::closed_form) {
    if (y == 0.0) return p.cascade[k][0];
    const double norm = std::exp2(p.ord.gamma - 1.0) * std::tgamma(p.ord.gamma);
    double Ck = 1.0;
    for (int j = 0; j < k; ++j) Ck *= -2.0 * (p.ord.m - j);
    const double nu = p.ord.gamma - k;
    return Ck * ypow_K(nu, nu, y) / norm;
  }
  const int n = static_cast<int>(p.nodes()) - 1;
  if (y >= p.y_max)
    return p.cascade[k][n] * tail_ratio(p.ord, k, p.y_max, y);
  const double s = std::sqrt(y / p.y_max);
  const double u = s * n;
  int i0 = std::clamp(static_cast<int>(std::floor(u)) - 1, 0, n - 3);
  double result = 0.0;
  for (int a = 0; a < 4; ++a) {
    double lag = 1.0;
    for (int c = 0; c < 4; ++c)
      if (c != a) lag *= (u - (i0 + c)) / static_cast<double>(a - c);
    result += lag * p.cascade[k][i0 + a];
  }
  return result;
}

std::vector<double> apply_profile_operator(const Profile& p,
                                           const std::vector<double>& values,
                                           double weight,
                                           double branch_exponent) {
  if (values.size() != p.nodes())
    throw GridMismatchError("operator input does not match the profile grid");
  if (!(branch_exponent > 0.0)) branch_exponent = 2.0 * p.ord.gamma;
  const int n = static_cast<int>(p.nodes()) - 1;
  std::vector<double> dy, dyy;
  fd_derivatives(values, p.y_max, dy, dyy, branch_exponent);
  std::vector<double> out(n + 1);
  for (int i = 1; i <= n; ++i)
    out[i] = dyy[i] + (weight / p.y_grid[i]) * dy[i] - values[i];
  // y = 0: the head model's operator limit (even part (1+w) u''(0) plus
  // whatever the branch image contributes there).
  const detail::HeadModel hm = detail::head_model(p.y_grid, branch_exponent);
  const std::array<double, 4> w0 = detail::head_operator_row(hm, weight, 0.0);
  double acc = 0.0;
  for (int j = 0; j < 4; ++j) acc += w0[j] * values[hm.support[j]];
  out[0] = acc - values[0];
  return out;
}

void write_profile_csv(const Profile& p, std::ostream& out) {
  const int m = p.ord.m;
  out << "y,phi,dphi,d2phi";
  for (int k = 1; k <= m; ++k) {
    const std::string tag = k == 1 ? "Lb" : "Lb" + std::to_string(k);
    out << ',' << tag << "_phi,d" << tag << "_phi,d2" << tag << "_phi";
  }
  out << '\n';
  char buf[32];
  auto emit = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    out << buf;
  };
  for (std::size_t i = 0; i < p.nodes(); ++i) {
    emit(p.y_grid[i]);
    for (int k = 0; k <= m; ++k) {
      out << ',';
      emit(p.cascade[k][i]);
      out << ',';
      emit(p.cascade_dy[k][i]);
      out << ',';
      emit(p.cascade_dyy[k][i]);
    }
    out << '\n';
  }
}

void write_profile_csv(const Profile& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  write_profile_csv(p, f);
}

}  // namespace fraclab
