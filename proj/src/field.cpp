// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/field.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"
#include "fraclab/kernels.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/spectral.hpp"
#include "fraclab/threads.hpp"
#include "graded_detail.hpp"

namespace fraclab {
namespace {

std::vector<double> level_slice(const std::vector<double>& tensor,
                                std::size_t iy, std::size_t st) {
  return {tensor.begin() + iy * st, tensor.begin() + (iy + 1) * st};
}

// Spectral Laplacian of one y-level: forward transform, multiply by
// -|xi|^2, synthesize back.
std::vector<double> laplacian_x_row(const XGrid& g,
                                    std::vector<double> row_values) {
  BoundaryFunction row;
  row.grid = g;
  row.values = std::move(row_values);
  Spectrum s = dft_forward(row);
  for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
    const double mag = s.frequency_magnitudes[i];
    s.coefficients[i] *= -mag * mag;
  }
  return dft_inverse(s).values;
}

// Functional weights for u'(0) from the {1, y, y^2} fit through nodes
// {0, j, 2j} (the odd-trace extrapolation). Spread-out nodes keep the
// 1/y weight amplification away from the roundoff floor, so refinement
// studies see the truncation term shrink instead of noise grow.
struct OddTraceWeights {
  std::array<int, 3> support;
  std::array<double, 3> w;
};
OddTraceWeights linear_d1_weights(const std::vector<double>& y) {
  const int j = y.size() >= 9 ? 4 : 1;
  OddTraceWeights ow;
  ow.support = {0, j, 2 * j};
  Eigen::Matrix3d M;
  const double yt = y[2 * j];
  for (int i = 0; i < 3; ++i) {
    const double t = y[ow.support[i]] / yt;
    M(i, 0) = 1.0;
    M(i, 1) = t;
    M(i, 2) = t * t;
  }
  Eigen::Vector3d w =
      M.transpose().fullPivLu().solve(Eigen::Vector3d(0.0, 1.0, 0.0));
  ow.w = {w(0) / yt, w(1) / yt, w(2) / yt};
  return ow;
}

// Mean over x of W^2, one entry per y-level.
std::vector<double> mean_sq_rows(const XGrid& g, const std::vector<double>& W,
                                 std::size_t ny) {
  const std::size_t st = g.total_points();
  std::vector<double> G(ny);
  parallel_for(ny, [&](std::size_t iy) {
    G[iy] = kernels::sum_sq(W.data() + iy * st, st) / static_cast<double>(st);
  });
  return G;
}

// Mean over x of |grad W|^2 per level: the x-part is the exact spectral
// sum |xi|^2 |W-hat|^2, the y-part the graded stencils (odd-trace linear
// fit on the boundary row). Rows are filled independently and reduced by
// the caller in level order, keeping reports bit-stable.
std::vector<double> mean_grad_sq_rows(const XGrid& g,
                                      const std::vector<double>& y,
                                      double y_max,
                                      const std::vector<double>& W) {
  const std::size_t st = g.total_points();
  const std::size_t ny = y.size();
  const int n = static_cast<int>(ny) - 1;
  const double h = 1.0 / n;
  const OddTraceWeights wlin = linear_d1_weights(y);
  std::vector<double> G(ny);
  parallel_for(ny, [&](std::size_t iy) {
    BoundaryFunction row;
    row.grid = g;
    row.values = level_slice(W, iy, st);
    const Spectrum s = dft_forward(row);
    double gx = 0.0;
    for (std::size_t i = 0; i < s.coefficients.size(); ++i) {
      const double mag = s.frequency_magnitudes[i];
      gx += mag * mag * std::norm(s.coefficients[i]);
    }
    std::vector<double> dy(st, 0.0);
    if (iy == 0) {
      for (int j = 0; j < 3; ++j)
        kernels::axpy(wlin.w[j], W.data() + wlin.support[j] * st, dy.data(),
                      st);
    } else {
      int first;
      std::array<double, 5> d1, d2;
      detail::stencil_at(static_cast<int>(iy), n, h, first, d1, d2);
      std::vector<double> us(st, 0.0);
      for (int j = 0; j < 5; ++j)
        kernels::axpy(d1[j], W.data() + (first + j) * st, us.data(), st);
      const double inv = 1.0 / (2.0 * y_max * (iy * h));
      for (std::size_t ix = 0; ix < st; ++ix) dy[ix] = us[ix] * inv;
    }
    G[iy] = gx + kernels::sum_sq(dy.data(), st) / static_cast<double>(st);
  });
  return G;
}

double box_volume(const XGrid& g) {
  return g.n_dim == 2 ? g.period * g.period : g.period;
}

void require_levels(const HalfSpaceField& u, const char* who) {
  if (u.levels() < 5 || u.iterates.empty() ||
      u.values().size() != u.levels() * u.stride())
    throw InsufficientGridError(std::string(who) +
                                " needs at least 5 consistent y-levels");
}

}  // namespace

HalfSpaceField extend(const BoundaryFunction& f, const Profile& p) {
  if (f.values.size() != f.grid.total_points() || f.values.empty())
    throw GridMismatchError("extend: boundary samples do not match the grid");
  if (p.nodes() < 5)
    throw GridMismatchError("extend: profile grid too small");

  const Spectrum sp = dft_forward(f);
  const std::size_t st = f.grid.total_points();
  const std::size_t ny = p.nodes();
  const int m = p.ord.m;

  // Deduplicate frequency magnitudes: the profile is radial, so one
  // evaluation per (|xi|, level) pair feeds every mode on that ring.
  std::vector<double> umag;
  std::vector<int> ring(st);
  {
    std::map<double, int> seen;
    for (std::size_t i = 0; i < st; ++i) {
      auto [it, fresh] =
          seen.emplace(sp.frequency_magnitudes[i], static_cast<int>(umag.size()));
      if (fresh) umag.push_back(sp.frequency_magnitudes[i]);
      ring[i] = it->second;
    }
  }

  HalfSpaceField u;
  u.x_grid = f.grid;
  u.ord = p.ord;
  u.y_grid = p.y_grid;
  u.y_max = p.y_max;
  u.profile_J = p.J_value;
  u.profile_neumann_c = p.neumann_c;
  u.iterates.assign(m + 2, std::vector<double>(ny * st, 0.0));

  parallel_for(ny, [&](std::size_t iy) {
    const double y = p.y_grid[iy];
    Spectrum level;
    level.grid = f.grid;
    level.coefficients.resize(st);
    std::vector<double> prof(umag.size());
    std::vector<double> pw(umag.size(), 1.0);  // running |xi|^(2k)
    for (int k = 0; k <= m; ++k) {
      for (std::size_t q = 0; q < umag.size(); ++q)
        prof[q] = umag[q] == 0.0 ? (k == 0 ? 1.0 : 0.0)
                                 : pw[q] * eval_cascade(p, k, umag[q] * y);
      for (std::size_t i = 0; i < st; ++i)
        level.coefficients[i] = sp.coefficients[i] * prof[ring[i]];
      const BoundaryFunction row = dft_inverse(level);
      std::copy(row.values.begin(), row.values.end(),
                u.iterates[k].begin() + iy * st);
      for (std::size_t q = 0; q < umag.size(); ++q) pw[q] *= umag[q] * umag[q];
    }
    // iterate m+1 vanishes identically for the separated representation;
    // rebuild_iterates_fd swaps in the finite-difference residual instead.
  });
  return u;
}

namespace {

// Shared core of apply_delta_b: branch_q names the leading non-even head
// power of the field being differentiated (2 gamma for U itself, two less
// per cascade step).
HalfSpaceField apply_delta_b_branch(const HalfSpaceField& u, double branch_q) {
  const std::size_t st = u.stride();
  const std::size_t ny = u.levels();
  const int n = static_cast<int>(ny) - 1;
  const double h = 1.0 / n;
  const double Y = u.y_max;
  const double b = u.ord.b;
  const auto& src = u.values();

  // head rows: the y-part of Delta_b at the first four levels from the
  // branch-aware model (row 0 is the (1+b) U_yy(x,0) series limit)
  const detail::HeadModel hm = detail::head_model(u.y_grid, branch_q);
  const std::size_t head_count = static_cast<std::size_t>(hm.eval_count);
  std::vector<std::array<double, 4>> hrow(head_count);
  for (std::size_t t = 0; t < head_count; ++t)
    hrow[t] = detail::head_operator_row(hm, b, u.y_grid[t]);

  HalfSpaceField out;
  out.x_grid = u.x_grid;
  out.ord = u.ord;
  out.y_grid = u.y_grid;
  out.y_max = u.y_max;
  out.profile_J = u.profile_J;
  out.profile_neumann_c = u.profile_neumann_c;
  out.iterates.assign(1, std::vector<double>(ny * st, 0.0));
  auto& dst = out.iterates[0];

  parallel_for(ny, [&](std::size_t iy) {
    std::vector<double> acc = laplacian_x_row(u.x_grid, level_slice(src, iy, st));
    if (iy < head_count) {
      for (int j = 0; j < 4; ++j)
        kernels::axpy(hrow[iy][j], src.data() + hm.support[j] * st, acc.data(),
                      st);
    } else {
      int first;
      std::array<double, 5> d1, d2;
      detail::stencil_at(static_cast<int>(iy), n, h, first, d1, d2);
      std::vector<double> us(st, 0.0), uss(st, 0.0);
      for (int j = 0; j < 5; ++j) {
        kernels::axpy(d1[j], src.data() + (first + j) * st, us.data(), st);
        kernels::axpy(d2[j], src.data() + (first + j) * st, uss.data(), st);
      }
      const double s = iy * h;
      const double y = u.y_grid[iy];
      for (std::size_t ix = 0; ix < st; ++ix) {
        const double uy = us[ix] / (2.0 * Y * s);
        const double uyy = (uss[ix] - us[ix] / s) / (4.0 * Y * Y * s * s);
        acc[ix] += uyy + (b / y) * uy;
      }
    }
    std::copy(acc.begin(), acc.end(), dst.begin() + iy * st);
  });
  return out;
}

}  // namespace

HalfSpaceField apply_delta_b(const HalfSpaceField& u) {
  require_levels(u, "apply_delta_b");
  return apply_delta_b_branch(u, 2.0 * u.ord.gamma);
}

void rebuild_iterates_fd(HalfSpaceField& u) {
  require_levels(u, "rebuild_iterates_fd");
  const int m = u.ord.m;
  u.iterates.resize(1);
  HalfSpaceField cur = u;
  for (int k = 1; k <= m + 1; ++k) {
    cur = apply_delta_b_branch(cur, 2.0 * u.ord.gamma - 2.0 * (k - 1));
    u.iterates.push_back(cur.values());
  }
}

EnergyReport extension_energy(const HalfSpaceField& u) {
  require_levels(u, "extension_energy");
  const int m = u.ord.m;
  const int K = (m + 1) / 2;
  if (static_cast<int>(u.iterates.size()) <= K)
    throw GridMismatchError("extension_energy: cascade iterates missing");
  const std::size_t st = u.stride();
  const std::size_t ny = u.levels();
  const double Ln = box_volume(u.x_grid);

  BoundaryFunction trace;
  trace.grid = u.x_grid;
  trace.values = level_slice(u.values(), 0, st);
  const double lhs = hgamma_seminorm_sq(dft_forward(trace), u.ord);

  // m odd: int y^b W^2; m even: int y^b |grad W|^2, W the middle iterate.
  const std::vector<double> G =
      m % 2 == 1 ? mean_sq_rows(u.x_grid, u.iterates[K], ny)
                 : mean_grad_sq_rows(u.x_grid, u.y_grid, u.y_max, u.iterates[K]);

  const double total =
      clipped_weighted_trapezoid(u.y_grid, G, u.ord.b, 0.0, u.y_max);
  const double tail = clipped_weighted_trapezoid(
      u.y_grid, G, u.ord.b, u.y_grid[(3 * (ny - 1)) / 4], u.y_max);
  if (std::abs(tail) > 1e-8 * std::abs(total))
    throw DivergentEnergyError("extension energy tail fails to decay");

  EnergyReport r;
  r.ord = u.ord;
  r.lhs = lhs;
  r.rhs = Ln * total;
  r.ratio = lhs > 0.0 ? r.rhs / lhs : 0.0;
  r.J_expected = u.profile_J;
  r.nx = static_cast<std::size_t>(u.x_grid.points_per_axis);
  r.ny = ny;
  return r;
}

BoundaryFunction neumann_trace(const HalfSpaceField& u) {
  require_levels(u, "neumann_trace");
  const int m = u.ord.m;
  if (static_cast<int>(u.iterates.size()) <= m)
    throw GridMismatchError("neumann_trace: iterate m missing");
  const std::size_t st = u.stride();
  const double sigma = 1.0 - u.ord.b;
  const double fac = sigma / (sigma - 2.0);
  const std::vector<double> w4 = detail::head_branch_weights(u.y_grid, sigma, 4);
  const std::vector<double> w3 = detail::head_branch_weights(u.y_grid, sigma, 3);
  const auto& Um = u.iterates[m];

  BoundaryFunction out;
  out.grid = u.x_grid;
  out.values.assign(st, 0.0);
  std::vector<double> alt(st, 0.0);
  for (int j = 0; j < 4; ++j)
    kernels::axpy(fac * w4[j], Um.data() + j * st, out.values.data(), st);
  for (int j = 0; j < 3; ++j)
    kernels::axpy(fac * w3[j], Um.data() + j * st, alt.data(), st);

  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < st; ++i) {
    scale = std::max(scale, std::abs(out.values[i]));
    diff = std::max(diff, std::abs(out.values[i] - alt[i]));
  }
  if (diff > 1e-3 * std::max(1.0, scale))
    throw ExtrapolationUnstableError(
        "neumann head fits disagree by " + std::to_string(diff));
  return out;
}

RegularizedEnergyReport regularized_energy_limit(
    const HalfSpaceField& u, const std::vector<double>& epsilons) {
  if (std::abs(u.ord.gamma - 1.5) > 1e-12)
    throw WrongOrderError("the finite-part identity is derived at gamma = 3/2");
  require_levels(u, "regularized_energy_limit");
  if (u.iterates.size() < 3)
    throw GridMismatchError("regularized_energy_limit: iterates missing");
  if (epsilons.empty())
    throw GridMismatchError("regularized_energy_limit: no epsilons");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !(epsilons[i] < u.y_max) ||
        (i > 0 && !(epsilons[i] < epsilons[i - 1])))
      throw GridMismatchError(
          "epsilons must decrease strictly inside (0, y_max)");
  }
  const std::size_t st = u.stride();
  const std::size_t ny = u.levels();
  const double Ln = box_volume(u.x_grid);

  BoundaryFunction trace;
  trace.grid = u.x_grid;
  trace.values = level_slice(u.values(), 0, st);
  const Spectrum tsp = dft_forward(trace);
  double P = 0.0;
  for (std::size_t i = 0; i < tsp.coefficients.size(); ++i) {
    const double mag = tsp.frequency_magnitudes[i];
    P += mag * mag * std::norm(tsp.coefficients[i]);
  }
  P *= Ln;

  const std::vector<double> Q =
      mean_grad_sq_rows(u.x_grid, u.y_grid, u.y_max, u.values());

  RegularizedEnergyReport rep;
  rep.epsilons = epsilons;
  rep.finite_part_estimates.reserve(epsilons.size());
  for (const double e : epsilons) {
    const double cut =
        Ln * clipped_weighted_trapezoid(u.y_grid, Q, -2.0, e, u.y_max);
    rep.finite_part_estimates.push_back(P / e - cut);
  }

  // Richardson in eps^2 over consecutive pairs; the last extrapolant is
  // the limit, earlier ones monitor convergence.
  std::vector<double> extrap;
  for (std::size_t i = 0; i + 1 < epsilons.size(); ++i) {
    const double r = epsilons[i + 1] / epsilons[i];
    extrap.push_back((rep.finite_part_estimates[i + 1] -
                      r * r * rep.finite_part_estimates[i]) /
                     (1.0 - r * r));
  }
  rep.extrapolated_limit =
      extrap.empty() ? rep.finite_part_estimates.back() : extrap.back();
  if (!std::isfinite(rep.extrapolated_limit))
    throw NoConvergenceError("finite-part extrapolation is not finite");
  if (extrap.size() >= 2) {
    const double drift = std::abs(extrap.back() - extrap[extrap.size() - 2]);
    if (drift > 0.05 * std::max(std::abs(rep.extrapolated_limit), 1e-12))
      throw NoConvergenceError("finite-part extrapolants do not settle");
  }

  const std::vector<double> G1 = mean_sq_rows(u.x_grid, u.iterates[1], ny);
  rep.bulk_energy_half = 0.5 * Ln * graded_simpson_yb(G1, u.y_max, 0.0);
  return rep;
}

double odd_trace_residual(const HalfSpaceField& u, int k) {
  require_levels(u, "odd_trace_residual");
  if (k < 0 || k > u.ord.m || static_cast<int>(u.iterates.size()) <= k)
    throw WrongOrderError("odd_trace_residual: iterate index out of range");
  const std::size_t st = u.stride();
  const OddTraceWeights w = linear_d1_weights(u.y_grid);
  std::vector<double> d(st, 0.0);
  for (int j = 0; j < 3; ++j)
    kernels::axpy(w.w[j], u.iterates[k].data() + w.support[j] * st, d.data(),
                  st);
  double sup = 0.0;
  for (const double v : d) sup = std::max(sup, std::abs(v));
  return sup;
}

double equation1_residual(const HalfSpaceField& u) {
  require_levels(u, "equation1_residual");
  const std::size_t st = u.stride();
  const std::size_t ny = u.levels();
  const int n = static_cast<int>(ny) - 1;
  const double h = 1.0 / n;
  const double Y = u.y_max;
  const double a = u.ord.a;
  const auto& src = u.values();

  // equation (1) carries the weight a, which annihilates the y^(2 gamma)
  // branch; the head rows encode that exactly where stencils cannot.
  const detail::HeadModel hm = detail::head_model(u.y_grid, 2.0 * u.ord.gamma);
  const std::size_t head_count = static_cast<std::size_t>(hm.eval_count);
  std::vector<std::array<double, 4>> hrow(head_count);
  for (std::size_t t = 1; t < head_count; ++t)
    hrow[t] = detail::head_operator_row(hm, a, u.y_grid[t]);

  std::vector<double> level_ssq(ny, 0.0);
  parallel_for(ny, [&](std::size_t iy) {
    if (iy == 0 || iy == static_cast<std::size_t>(n)) return;
    std::vector<double> acc = laplacian_x_row(u.x_grid, level_slice(src, iy, st));
    if (iy < head_count) {
      for (int j = 0; j < 4; ++j)
        kernels::axpy(hrow[iy][j], src.data() + hm.support[j] * st, acc.data(),
                      st);
    } else {
      int first;
      std::array<double, 5> d1, d2;
      detail::stencil_at(static_cast<int>(iy), n, h, first, d1, d2);
      std::vector<double> us(st, 0.0), uss(st, 0.0);
      for (int j = 0; j < 5; ++j) {
        kernels::axpy(d1[j], src.data() + (first + j) * st, us.data(), st);
        kernels::axpy(d2[j], src.data() + (first + j) * st, uss.data(), st);
      }
      const double s = iy * h;
      const double y = u.y_grid[iy];
      for (std::size_t ix = 0; ix < st; ++ix) {
        const double uy = us[ix] / (2.0 * Y * s);
        const double uyy = (uss[ix] - us[ix] / s) / (4.0 * Y * Y * s * s);
        acc[ix] += uyy + (a / y) * uy;
      }
    }
    level_ssq[iy] = kernels::sum_sq(acc.data(), st);
  });
  // Discrete L2 over the slab: each level carries its cell measure. On a
  // graded mesh a flat per-node average would let the sliver cells near
  // y = 0 dominate, and pointwise second differences there are inherently
  // roundoff-limited (the 1/dy^2 amplification grows as the cells shrink).
  double total = 0.0, measure = 0.0;
  for (int iy = 1; iy < n; ++iy) {
    const double cw = 0.5 * (u.y_grid[iy + 1] - u.y_grid[iy - 1]);
    total += cw * level_ssq[iy];
    measure += cw;
  }
  return std::sqrt(total / (measure * st));
}

TraceInequality trace_inequality_check(const HalfSpaceField& u) {
  const EnergyReport r = extension_energy(u);
  const double Ln = box_volume(u.x_grid);
  TraceInequality t;
  t.lhs = r.lhs;
  t.rhs = r.rhs;
  t.ok = t.lhs <= (t.rhs / (Ln * u.profile_J)) * (1.0 + 1e-6);
  if (t.lhs == 0.0 && t.rhs == 0.0) t.ok = true;  // constant trace: 0 <= 0
  return t;
}

void write_field_csv(const HalfSpaceField& u, std::ostream& out) {
  const std::size_t st = u.stride();
  const int N = u.x_grid.points_per_axis;
  out << (u.x_grid.n_dim == 2 ? "x0,x1" : "x") << ",y,U";
  for (std::size_t k = 1; k < u.iterates.size(); ++k) out << ",U_" << k;
  out << '\n';
  char buf[64];
  auto emit = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (std::size_t iy = 0; iy < u.levels(); ++iy) {
    for (std::size_t ix = 0; ix < st; ++ix) {
      if (u.x_grid.n_dim == 2) {
        emit(u.x_grid.coord(static_cast<int>(ix) / N));
        out << ',';
        emit(u.x_grid.coord(static_cast<int>(ix) % N));
      } else {
        emit(u.x_grid.coord(static_cast<int>(ix)));
      }
      out << ',';
      emit(u.y_grid[iy]);
      for (const auto& it : u.iterates) {
        out << ',';
        emit(it[iy * st + ix]);
      }
      out << '\n';
    }
  }
}

void write_field_csv(const HalfSpaceField& u, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path + " for writing");
  write_field_csv(u, f);
}

}  // namespace fraclab
