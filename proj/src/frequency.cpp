// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/frequency.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"
#include "fraclab/threads.hpp"
#include "graded_detail.hpp"

namespace fraclab {
namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Gauss-Jacobi rules via Golub-Welsch: nodes/weights for
// int_{-1}^{1} f(t) (1-t)^alpha (1+t)^beta dt. The symmetric tridiagonal
// eigenproblem comes from the monic three-term recurrence; weights are
// mu0 times the squared first eigenvector components.
struct GaussRule {
  std::vector<double> node;
  std::vector<double> weight;
};

GaussRule jacobi_rule(int n, double alpha, double beta) {
  const double ab = alpha + beta;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  T(0, 0) = (beta - alpha) / (ab + 2.0);
  for (int j = 1; j < n; ++j) {
    const double d = 2.0 * j + ab;
    T(j, j) = (beta * beta - alpha * alpha) / (d * (d + 2.0));
    const double num =
        j == 1 ? 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab))
               : 4.0 * j * (j + alpha) * (j + beta) * (j + ab) /
                     (d * d * (d + 1.0) * (d - 1.0));
    const double off = std::sqrt(num);
    T(j, j - 1) = off;
    T(j - 1, j) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  GaussRule r;
  r.node.resize(n);
  r.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    r.node[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    r.weight[i] = mu0 * v0 * v0;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Sampled field with grid gradients, ready for off-grid evaluation.
// Gradients: 4th-order periodic central differences in x; in y the graded
// five-point stencils with the branch-aware head rows (the k-th iterate
// carries the y^(2 gamma - 2k) branch, clamped at sigma).
struct FieldStack {
  const HalfSpaceField* u = nullptr;
  int nx = 0;
  int n = 0;  // y intervals
  double hx = 0.0;
  double Y = 0.0;
  std::vector<const std::vector<double>*> val;
  std::vector<std::vector<double>> gx, gy;
};

void require_dim1(const XGrid& g, const char* who) {
  if (g.n_dim != 1)
    throw UnsupportedDimensionError(std::string(who) +
                                    ": ball quadrature is implemented for 1-D traces "
                                    "(ambient dimension 2) only");
}

FieldStack build_stack(const HalfSpaceField& u, int n_grad) {
  require_dim1(u.x_grid, "build_stack");
  FieldStack fs;
  fs.u = &u;
  fs.nx = u.x_grid.points_per_axis;
  fs.n = static_cast<int>(u.levels()) - 1;
  fs.hx = u.x_grid.spacing();
  fs.Y = u.y_max;
  for (const auto& it : u.iterates) fs.val.push_back(&it);
  n_grad = std::min<int>(n_grad, static_cast<int>(u.iterates.size()));
  fs.gx.resize(n_grad);
  fs.gy.resize(n_grad);

  const int nx = fs.nx;
  const int n = fs.n;
  const double h = 1.0 / n;
  const double sigma = 1.0 - u.ord.b;
  for (int k = 0; k < n_grad; ++k) {
    const auto& src = *fs.val[k];
    auto& gx = fs.gx[k];
    auto& gy = fs.gy[k];
    gx.assign(src.size(), 0.0);
    gy.assign(src.size(), 0.0);

    parallel_for(u.levels(), [&](std::size_t iy) {
      const double* row = src.data() + iy * nx;
      double* out = gx.data() + iy * nx;
      for (int i = 0; i < nx; ++i) {
        const double um2 = row[(i - 2 + nx) % nx], um1 = row[(i - 1 + nx) % nx];
        const double up1 = row[(i + 1) % nx], up2 = row[(i + 2) % nx];
        out[i] = (um2 - 8.0 * um1 + 8.0 * up1 - up2) / (12.0 * fs.hx);
      }
    });

    const double branch_q = std::max(2.0 * u.ord.gamma - 2.0 * k, sigma);
    const detail::HeadModel hm = detail::head_model(u.y_grid, branch_q);
    parallel_for(u.levels(), [&](std::size_t iy) {
      double* out = gy.data() + iy * nx;
      if (iy == 0) {
        // Finite part of u_y at the trace: only a linear ladder term
        // contributes; a sub-linear branch has no finite derivative and
        // is dropped (the y^b weight keeps it out of every integral).
        Eigen::Vector4d img = Eigen::Vector4d::Zero();
        for (int c = 0; c < 4; ++c)
          if (hm.exponent[c] == 1.0) img(c) = 1.0 / hm.scale;
        const Eigen::Vector4d wv = hm.lu.solve(img);
        for (int i = 0; i < nx; ++i) {
          double acc = 0.0;
          for (int j = 0; j < 4; ++j)
            acc += wv(j) * src[hm.support[j] * static_cast<std::size_t>(nx) + i];
          out[i] = acc;
        }
        return;
      }
      if (iy < static_cast<std::size_t>(hm.eval_count)) {
        std::array<double, 4> d1, d2;
        detail::head_derivative_rows(hm, u.y_grid[iy], d1, d2);
        for (int i = 0; i < nx; ++i) {
          double acc = 0.0;
          for (int j = 0; j < 4; ++j)
            acc += d1[j] * src[hm.support[j] * static_cast<std::size_t>(nx) + i];
          out[i] = acc;
        }
        return;
      }
      int first;
      std::array<double, 5> d1, d2;
      detail::stencil_at(static_cast<int>(iy), n, h, first, d1, d2);
      const double s = iy * h;
      for (int i = 0; i < nx; ++i) {
        double us = 0.0;
        for (int j = 0; j < 5; ++j)
          us += d1[j] * src[(first + j) * static_cast<std::size_t>(nx) + i];
        out[i] = us / (2.0 * fs.Y * s);
      }
    });
  }
  return fs;
}

// 4-point tensor Lagrange stencil at (x, y): cubic in x (periodic) and in
// the mesh parameter s = sqrt(y / y_max), where the graded nodes are
// uniform.
struct InterpStencil {
  std::array<int, 4> ix;
  std::array<int, 4> iy;
  std::array<double, 4> wx;
  std::array<double, 4> wy;
};

std::array<double, 4> lagrange4(double t, int base) {
  // weights for nodes base..base+3 evaluated at t (same axis units)
  std::array<double, 4> w;
  for (int j = 0; j < 4; ++j) {
    double p = 1.0;
    for (int l = 0; l < 4; ++l)
      if (l != j) p *= (t - (base + l)) / (j - l);
    w[j] = p;
  }
  return w;
}

InterpStencil make_stencil(const FieldStack& fs, double x, double y) {
  InterpStencil st;
  const double L = fs.u->x_grid.period;
  double tx = (x - L * std::floor(x / L)) / fs.hx;
  if (tx >= fs.nx) tx -= fs.nx;
  int bx = static_cast<int>(std::floor(tx)) - 1;
  st.wx = lagrange4(tx - bx, 0);
  for (int j = 0; j < 4; ++j) st.ix[j] = ((bx + j) % fs.nx + fs.nx) % fs.nx;

  const double ts = std::sqrt(std::max(y, 0.0) / fs.Y) * fs.n;
  int by = static_cast<int>(std::floor(ts)) - 1;
  by = std::clamp(by, 0, fs.n - 3);
  st.wy = lagrange4(ts - by, 0);
  for (int j = 0; j < 4; ++j) st.iy[j] = by + j;
  return st;
}

double apply_stencil(const FieldStack& fs, const std::vector<double>& grid,
                     const InterpStencil& st) {
  double acc = 0.0;
  for (int jy = 0; jy < 4; ++jy) {
    const double* row = grid.data() + st.iy[jy] * static_cast<std::size_t>(fs.nx);
    double r = 0.0;
    for (int jx = 0; jx < 4; ++jx) r += st.wx[jx] * row[st.ix[jx]];
    acc += st.wy[jy] * r;
  }
  return acc;
}

void check_ball_fits(const FieldStack& fs, const BallQuadrature& q,
                     const char* who) {
  const double top = q.half_ball ? q.radius : q.center_y + q.radius;
  if (top > fs.Y * (1.0 + 1e-12))
    throw QuadratureOutOfDomainError(std::string(who) + ": ball reaches y = " +
                                     std::to_string(top) + " above the sampled depth " +
                                     std::to_string(fs.Y));
  if (2.0 * q.radius >= fs.u->x_grid.period)
    throw QuadratureOutOfDomainError(std::string(who) +
                                     ": ball diameter exceeds the periodic box");
}

void require_iterates(const HalfSpaceField& u, const char* who) {
  const std::size_t need = static_cast<std::size_t>(u.ord.m) + 2;
  if (u.iterates.size() < need)
    throw InsufficientGridError(std::string(who) + ": field carries " +
                                std::to_string(u.iterates.size()) + " iterates, needs " +
                                std::to_string(need));
}

double stack_D(const FieldStack& fs, const BallQuadrature& q, int m) {
  double acc = 0.0;
  for (const auto& nd : q.volume_nodes) {
    const InterpStencil st = make_stencil(fs, nd.x, nd.y);
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double gx = apply_stencil(fs, fs.gx[k], st);
      const double gy = apply_stencil(fs, fs.gy[k], st);
      const double vk = apply_stencil(fs, *fs.val[k], st);
      const double vk1 = apply_stencil(fs, *fs.val[k + 1], st);
      s += gx * gx + gy * gy + vk * vk1;
    }
    acc += nd.w * s;
  }
  return acc;
}

double stack_H(const FieldStack& fs, const BallQuadrature& q, int m) {
  double acc = 0.0;
  for (const auto& nd : q.surface_nodes) {
    const InterpStencil st = make_stencil(fs, nd.x, nd.y);
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double vk = apply_stencil(fs, *fs.val[k], st);
      s += vk * vk;
    }
    acc += nd.w * s;
  }
  return acc;
}

// Consecutive-pair slopes of log N where both ends have N > 1 (the regime
// the monotonicity statement concerns).
std::vector<double> qualifying_slopes(const std::vector<double>& radii,
                                      const std::vector<double>& N) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (N[i] > 1.0 && N[i + 1] > 1.0)
      out.push_back((std::log(N[i + 1]) - std::log(N[i])) / (radii[i + 1] - radii[i]));
  return out;
}

}  // namespace

BallQuadrature make_ball_quadrature(double center_x, double center_y,
                                    double radius, double b, int n_radial,
                                    int n_angular) {
  if (!(radius > 0.0))
    throw QuadratureOutOfDomainError("make_ball_quadrature: radius must be positive");
  if (n_radial < 2 || n_angular < 4)
    throw QuadratureOutOfDomainError("make_ball_quadrature: need >= 2 radial and >= 4 angular nodes");
  if (center_y < 0.0)
    throw QuadratureOutOfDomainError("make_ball_quadrature: center below the trace plane");

  BallQuadrature q;
  q.center_x = center_x;
  q.center_y = center_y;
  q.radius = radius;
  q.b = b;
  q.half_ball = center_y == 0.0;

  if (q.half_ball) {
    // y^b = rho^b sin(theta)^b exactly; the radial rule carries rho^(1+b)
    // (weight plus area element), the angular rule carries sin(theta)^b.
    const GaussRule rad = jacobi_rule(n_radial, 0.0, 1.0 + b);
    const GaussRule ang = jacobi_rule(n_angular, 0.5 * (b - 1.0), 0.5 * (b - 1.0));
    const double rscale = std::pow(0.5 * radius, 2.0 + b);
    q.volume_nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
    for (int i = 0; i < n_radial; ++i) {
      const double rho = 0.5 * radius * (1.0 + rad.node[i]);
      const double wr = rscale * rad.weight[i];
      for (int j = 0; j < n_angular; ++j) {
        const double ct = ang.node[j];
        const double stheta = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        BallQuadrature::Node nd;
        nd.xd = rho * ct;
        nd.yd = rho * stheta;
        nd.x = center_x + nd.xd;
        nd.y = nd.yd;
        nd.w = wr * ang.weight[j];
        q.volume_nodes.push_back(nd);
      }
    }
    const double sscale = std::pow(radius, 1.0 + b);
    q.surface_nodes.reserve(n_angular);
    for (int j = 0; j < n_angular; ++j) {
      const double ct = ang.node[j];
      const double stheta = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      BallQuadrature::Node nd;
      nd.xd = radius * ct;
      nd.yd = radius * stheta;
      nd.x = center_x + nd.xd;
      nd.y = nd.yd;
      nd.w = sscale * ang.weight[j];
      q.surface_nodes.push_back(nd);
    }
    return q;
  }

  if (center_y <= radius)
    throw QuadratureOutOfDomainError(
        "make_ball_quadrature: interior ball touches the trace plane (center_y <= radius); "
        "use a boundary-centered half-ball or shrink the radius");

  // Interior disk: y^b is smooth here, so plain Gauss-Legendre in radius
  // (Jacobi 0,0) with the rho area factor folded into the weight, and the
  // periodic trapezoid in angle.
  const GaussRule rad = jacobi_rule(n_radial, 0.0, 0.0);
  const double wtheta = 2.0 * kPi / n_angular;
  q.volume_nodes.reserve(static_cast<std::size_t>(n_radial) * n_angular);
  for (int i = 0; i < n_radial; ++i) {
    const double rho = 0.5 * radius * (1.0 + rad.node[i]);
    const double wr = 0.5 * radius * rad.weight[i] * rho;
    for (int j = 0; j < n_angular; ++j) {
      const double theta = wtheta * j;
      BallQuadrature::Node nd;
      nd.xd = rho * std::cos(theta);
      nd.yd = rho * std::sin(theta);
      nd.x = center_x + nd.xd;
      nd.y = center_y + nd.yd;
      nd.w = wr * wtheta * std::pow(nd.y, b);
      q.volume_nodes.push_back(nd);
    }
  }
  q.surface_nodes.reserve(n_angular);
  for (int j = 0; j < n_angular; ++j) {
    const double theta = wtheta * j;
    BallQuadrature::Node nd;
    nd.xd = radius * std::cos(theta);
    nd.yd = radius * std::sin(theta);
    nd.x = center_x + nd.xd;
    nd.y = center_y + nd.yd;
    nd.w = radius * wtheta * std::pow(nd.y, b);
    q.surface_nodes.push_back(nd);
  }
  return q;
}

double compute_D(const HalfSpaceField& u, const BallQuadrature& q) {
  require_iterates(u, "compute_D");
  const FieldStack fs = build_stack(u, u.ord.m + 1);
  check_ball_fits(fs, q, "compute_D");
  return stack_D(fs, q, u.ord.m);
}

double compute_H(const HalfSpaceField& u, const BallQuadrature& q) {
  require_iterates(u, "compute_H");
  const FieldStack fs = build_stack(u, 0);
  check_ball_fits(fs, q, "compute_H");
  return stack_H(fs, q, u.ord.m);
}

double compute_N(const HalfSpaceField& u, const BallQuadrature& q) {
  require_iterates(u, "compute_N");
  const FieldStack fs = build_stack(u, u.ord.m + 1);
  check_ball_fits(fs, q, "compute_N");
  const double H = stack_H(fs, q, u.ord.m);
  if (H == 0.0)
    throw ZeroHError("compute_N: H(r) = 0 (field vanishes on the sphere)");
  return q.radius * stack_D(fs, q, u.ord.m) / H;
}

FrequencyReport frequency_scan(const HalfSpaceField& u, double center_x,
                               double center_y, std::vector<double> radii,
                               int n_radial, int n_angular) {
  require_iterates(u, "frequency_scan");
  std::sort(radii.begin(), radii.end());
  if (!radii.empty() && !(radii.front() > 0.0))
    throw QuadratureOutOfDomainError("frequency_scan: radii must be positive");

  // The half-ball rules drop the flat face, which is only justified when
  // the odd traces vanish; refuse to scan when they measurably do not.
  if (center_y == 0.0) {
    for (int k = 0; k < u.ord.m; ++k) {
      const double res = odd_trace_residual(u, k);
      if (!(res < 1e-3))
        throw QuadratureOutOfDomainError(
            "frequency_scan: half-ball face terms are not negligible "
            "(odd_trace_residual(" + std::to_string(k) + ") = " + std::to_string(res) + ")");
    }
  }

  const FieldStack fs = build_stack(u, u.ord.m + 1);
  FrequencyReport rep;
  rep.center_x = center_x;
  rep.center_y = center_y;
  rep.b = u.ord.b;
  rep.m = u.ord.m;
  rep.radii = radii;
  rep.D_values.assign(radii.size(), 0.0);
  rep.H_values.assign(radii.size(), 0.0);
  rep.N_values.assign(radii.size(), 0.0);

  parallel_for(radii.size(), [&](std::size_t i) {
    const BallQuadrature q = make_ball_quadrature(center_x, center_y, radii[i],
                                                  u.ord.b, n_radial, n_angular);
    check_ball_fits(fs, q, "frequency_scan");
    rep.D_values[i] = stack_D(fs, q, u.ord.m);
    rep.H_values[i] = stack_H(fs, q, u.ord.m);
  });
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (rep.H_values[i] == 0.0)
      throw ZeroHError("frequency_scan: H = 0 at r = " + std::to_string(radii[i]));
    rep.N_values[i] = radii[i] * rep.D_values[i] / rep.H_values[i];
  }

  const std::vector<double> slopes = qualifying_slopes(rep.radii, rep.N_values);
  double worst = std::numeric_limits<double>::infinity();
  for (const double s : slopes) worst = std::min(worst, s);
  rep.lambda_estimate = slopes.empty() ? 0.0 : std::max(0.0, -worst);
  rep.margins.reserve(slopes.size());
  for (const double s : slopes) rep.margins.push_back(s + rep.lambda_estimate);
  return rep;
}

MonotonicityResult monotonicity_check(const FrequencyReport& report,
                                      double lambda) {
  const std::vector<double> slopes = qualifying_slopes(report.radii, report.N_values);
  MonotonicityResult res;
  res.worst_margin = std::numeric_limits<double>::infinity();
  for (const double s : slopes) res.worst_margin = std::min(res.worst_margin, s + lambda);
  res.ok = res.worst_margin >= -1e-9;
  return res;
}

double rellich_residual(const HalfSpaceField& w, const HalfSpaceField& v,
                        const BallQuadrature& q) {
  if (w.x_grid != v.x_grid || w.levels() != v.levels())
    throw GridMismatchError("rellich_residual: W and V live on different grids");
  const FieldStack fw = build_stack(w, 1);
  const FieldStack fv = build_stack(v, 0);
  check_ball_fits(fw, q, "rellich_residual");

  const double r = q.radius;
  double lhs = 0.0;
  for (const auto& nd : q.surface_nodes) {
    const InterpStencil st = make_stencil(fw, nd.x, nd.y);
    const double gx = apply_stencil(fw, fw.gx[0], st);
    const double gy = apply_stencil(fw, fw.gy[0], st);
    const double wr = (gx * nd.xd + gy * nd.yd) / r;
    lhs += nd.w * (gx * gx + gy * gy - 2.0 * wr * wr);
  }
  lhs *= r;

  const double coeff = w.x_grid.n_dim - 1.0 + q.b;
  double grad2 = 0.0, cross = 0.0;
  for (const auto& nd : q.volume_nodes) {
    const InterpStencil st = make_stencil(fw, nd.x, nd.y);
    const double gx = apply_stencil(fw, fw.gx[0], st);
    const double gy = apply_stencil(fw, fw.gy[0], st);
    grad2 += nd.w * (gx * gx + gy * gy);
    const double vval = apply_stencil(fv, *fv.val[0], st);
    cross += nd.w * (gx * nd.xd + gy * nd.yd) * vval;
  }
  const double rhs = coeff * grad2 - 2.0 * cross;
  return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

InteriorExteriorResult interior_exterior_check(const HalfSpaceField& w,
                                               const HalfSpaceField& v,
                                               const BallQuadrature& q) {
  if (w.x_grid != v.x_grid || w.levels() != v.levels())
    throw GridMismatchError("interior_exterior_check: W and V live on different grids");
  const FieldStack fw = build_stack(w, 0);
  const FieldStack fv = build_stack(v, 0);
  check_ball_fits(fw, q, "interior_exterior_check");

  InteriorExteriorResult res;
  double vsq = 0.0;
  for (const auto& nd : q.volume_nodes) {
    const InterpStencil st = make_stencil(fw, nd.x, nd.y);
    const double wv = apply_stencil(fw, *fw.val[0], st);
    res.lhs += nd.w * wv * wv;
    // the V^2 term is displayed without the weight; the node weight
    // carries y^b, so divide it back out
    const double vv = apply_stencil(fv, *fv.val[0], st);
    vsq += nd.w * std::pow(nd.y, -q.b) * vv * vv;
  }
  double surf = 0.0;
  for (const auto& nd : q.surface_nodes) {
    const InterpStencil st = make_stencil(fw, nd.x, nd.y);
    const double wv = apply_stencil(fw, *fw.val[0], st);
    surf += nd.w * wv * wv;
  }
  res.rhs = q.radius * surf + vsq;
  res.c_empirical = res.rhs > 0.0
                        ? res.lhs / res.rhs
                        : (res.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return res;
}

double dk_boundary_identity_residual(const HalfSpaceField& u,
                                     const BallQuadrature& q, int k) {
  if (k < 0 || k > u.ord.m)
    throw InsufficientGridError("dk_boundary_identity_residual: k out of range 0..m");
  if (u.iterates.size() < static_cast<std::size_t>(k) + 2)
    throw InsufficientGridError(
        "dk_boundary_identity_residual: needs iterates 0.." + std::to_string(k + 1));
  const FieldStack fs = build_stack(u, k + 1);
  check_ball_fits(fs, q, "dk_boundary_identity_residual");

  double vol = 0.0;
  for (const auto& nd : q.volume_nodes) {
    const InterpStencil st = make_stencil(fs, nd.x, nd.y);
    const double gx = apply_stencil(fs, fs.gx[k], st);
    const double gy = apply_stencil(fs, fs.gy[k], st);
    const double vk = apply_stencil(fs, *fs.val[k], st);
    const double vk1 = apply_stencil(fs, *fs.val[k + 1], st);
    vol += nd.w * (gx * gx + gy * gy + vk * vk1);
  }
  double surf = 0.0;
  for (const auto& nd : q.surface_nodes) {
    const InterpStencil st = make_stencil(fs, nd.x, nd.y);
    const double gx = apply_stencil(fs, fs.gx[k], st);
    const double gy = apply_stencil(fs, fs.gy[k], st);
    const double vk = apply_stencil(fs, *fs.val[k], st);
    surf += nd.w * vk * (gx * nd.xd + gy * nd.yd) / q.radius;
  }
  return std::abs(vol - surf);
}

double vanishing_order(const BoundaryFunction& f, double x0,
                       const std::vector<double>& radii) {
  require_dim1(f.grid, "vanishing_order");
  const double L = f.grid.period;
  const int nx = f.grid.points_per_axis;
  const double hx = f.grid.spacing();

  std::vector<double> usable;
  for (const double r : radii)
    if (r > 0.0 && r <= 0.5 * L) usable.push_back(r);
  if (usable.size() < 3)
    throw InsufficientRadiiError("vanishing_order: fewer than 3 usable radii (need r in (0, L/2])");

  auto interp_abs = [&](double x) {
    double t = (x - L * std::floor(x / L)) / hx;
    if (t >= nx) t -= nx;
    const int base = static_cast<int>(std::floor(t)) - 1;
    const std::array<double, 4> wl = lagrange4(t - base, 0);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j)
      acc += wl[j] * f.values[((base + j) % nx + nx) % nx];
    return std::abs(acc);
  };

  // composite Simpson on the interpolant; |.| kinks cost accuracy far
  // below the +-0.2 tolerance the estimator is used at
  auto ball_integral = [&](double r) {
    const int panels = 512;
    const double h = 2.0 * r / panels;
    double acc = interp_abs(x0 - r) + interp_abs(x0 + r);
    for (int i = 1; i < panels; ++i)
      acc += interp_abs(x0 - r + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
  };

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const double r : usable) {
    const double lx = std::log(r);
    const double ly = std::log(std::max(ball_integral(r), 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double npts = static_cast<double>(usable.size());
  return (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
}

void write_frequency_csv(const FrequencyReport& report, std::ostream& out) {
  out << "radius,D,H,N\n";
  char line[160];
  for (std::size_t i = 0; i < report.radii.size(); ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", report.radii[i],
                  report.D_values[i], report.H_values[i], report.N_values[i]);
    out << line;
  }
}

void write_frequency_csv(const FrequencyReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("write_frequency_csv: cannot open " + path);
  write_frequency_csv(report, out);
}

}  // namespace fraclab
