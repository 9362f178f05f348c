// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/order.hpp"
#include "fraclab/profile.hpp"

namespace fraclab {

/// Extension of a boundary function to the half-space, sampled on the
/// tensor grid (x_grid nodes) x (graded y_grid shared with the profile).
///
/// Layout is level-major: slot iy * x_grid.total_points() + ix. iterates[k]
/// holds L_b^k U for k = 0..m+1, where L_b = Delta_x + d_yy + (b/y) d_y.
/// Spectral assembly makes the last iterate vanish identically, so
/// extend() stores exact zeros there; finite-difference rebuilds keep the
/// discretization residual instead.
struct HalfSpaceField {
  XGrid x_grid;
  FractionalOrder ord;
  std::vector<double> y_grid;
  double y_max = 0.0;
  std::vector<std::vector<double>> iterates;

  // Carried over from the generating profile so energy reports can state
  // the expected ratio without re-solving the ODE.
  double profile_J = 0.0;
  double profile_neumann_c = 0.0;

  std::size_t levels() const { return y_grid.size(); }
  std::size_t stride() const { return x_grid.total_points(); }
  const std::vector<double>& values() const { return iterates.front(); }
  std::vector<double>& values() { return iterates.front(); }
};

/// Energy-identity bookkeeping: lhs is the squared order-gamma seminorm of
/// the trace, rhs the weighted extension energy, ratio their quotient
/// (which the identity pins at L^n * J independently of f).
struct EnergyReport {
  FractionalOrder ord;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double J_expected = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
};

/// Finite-part bookkeeping for the gamma = 3/2 regularized energy.
struct RegularizedEnergyReport {
  std::vector<double> epsilons;               ///< strictly decreasing
  std::vector<double> finite_part_estimates;  ///< S(eps) per epsilon
  double extrapolated_limit = 0.0;
  double bulk_energy_half = 0.0;  ///< (1/2) * weighted bulk energy
};

struct TraceInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

// Spectral assembly: U-hat(xi, y_j) = f-hat(xi) * phi(|xi| y_j) per mode
// (zero mode constant in y), synthesized level by level. Fills iterates
// 0..m from the profile cascade and the last one with zeros.
HalfSpaceField extend(const BoundaryFunction& f, const Profile& p);

// L_b applied to the field values: spectral Laplacian in x, the graded
// five-point stencils in y, and the even-series limit (1+b) U_yy(x,0) for
// the boundary row. The result carries a single iterate.
HalfSpaceField apply_delta_b(const HalfSpaceField& u);

// Recompute iterates 1..m+1 from iterates[0] by repeated apply_delta_b;
// used after hand-editing values (e.g. bump perturbations in tests).
void rebuild_iterates_fd(HalfSpaceField& u);

// Weighted extension energy against the trace seminorm. m odd uses
// int y^b |W|^2 with W the middle iterate; m even adds the full gradient
// of W. Throws DivergentEnergy when the y-tail fails to decay.
EnergyReport extension_energy(const HalfSpaceField& u);

// Weighted Neumann data lim_{y->0} y^b d_y(iterate m) as a boundary
// function; equals profile_neumann_c * |xi|^(2 gamma) * f-hat mode-wise.
BoundaryFunction neumann_trace(const HalfSpaceField& u);

// Finite-part limit S(eps) = (1/eps) int |grad_x f|^2 - int_{y>eps}
// |grad U|^2 / y^2, Richardson-extrapolated in eps^2, for gamma = 3/2
// only (WrongOrder otherwise).
RegularizedEnergyReport regularized_energy_limit(const HalfSpaceField& u,
                                                 const std::vector<double>& epsilons);

// sup_x of the extrapolated y-derivative of iterate k at y = 0. Vanishes
// under refinement for k < m; for k = m it recovers the (generally
// nonzero, possibly unbounded) Neumann magnitude and is reported as-is.
double odd_trace_residual(const HalfSpaceField& u, int k);

// Discrete L2 norm (cell-measure weighted in y, mean over x) of
// Delta_x U + U_yy + (a/y) U_y over interior levels -- the second-order
// equation every extension solves alongside the high-order one.
double equation1_residual(const HalfSpaceField& u);

// Trace inequality lhs <= rhs / (L^n J): returns both sides and the flag.
TraceInequality trace_inequality_check(const HalfSpaceField& u);

// CSV export, one row per (level, x-node): header x,y,U,U_1,... for 1-D
// grids (x0,x1 coordinate columns in 2-D), 17 significant digits.
void write_field_csv(const HalfSpaceField& u, std::ostream& out);
void write_field_csv(const HalfSpaceField& u, const std::string& path);

}  // namespace fraclab
