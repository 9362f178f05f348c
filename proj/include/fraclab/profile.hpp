// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fraclab/order.hpp"

namespace fraclab {

enum class ProfileRoute { closed_form, bvp };

// Per-frequency profile on a graded grid y_j = y_max * (j/n)^2, together
// with the operator cascade psi_k (psi_0 = phi, psi_{k+1} = L_b psi_k) and
// first/second y-derivatives of every member.
//
// Node-0 derivative entries hold the y->0 limits; for orders whose head
// expansion carries a y^(1-b) branch these limits can be +-infinity, which
// is stored as such rather than masked.
struct Profile {
  FractionalOrder ord;
  double y_max = 0.0;
  std::vector<double> y_grid;
  // cascade[k][j]: k = 0..m over grid nodes j = 0..n
  std::vector<std::vector<double>> cascade;
  std::vector<std::vector<double>> cascade_dy;
  std::vector<std::vector<double>> cascade_dyy;
  double J_value = 0.0;
  double neumann_c = 0.0;
  ProfileRoute route = ProfileRoute::closed_form;

  const std::vector<double>& phi() const { return cascade[0]; }
  const std::vector<double>& dphi() const { return cascade_dy[0]; }
  const std::vector<double>& d2phi() const { return cascade_dyy[0]; }
  std::size_t nodes() const { return y_grid.size(); }
};

struct BoundaryDerivativeRow {
  int k = 0;                    // even derivative order 2k
  double measured = 0.0;        // grid-extracted phi^(2k)(0)
  double theorem_product = 0.0; // (-1)^k prod_{j=1..k} 1/(2 gamma - 4(j-1))
  double frobenius = 0.0;       // (2k)! c_k with c_k = c_{k-1}/(4k(k-gamma))
  bool discrepant = false;      // the two predictions disagree
};

// Decaying solution via the Macdonald-function representation, sampled on
// the default or a caller-chosen graded grid. J_value and neumann_c are
// filled on construction.
Profile solve_profile_closed_form(const FractionalOrder& ord, double y_max = 30.0,
                                  int n_intervals = 2048);

// Independent route: sparse finite-difference solve of the cascade system
// L_b psi_k = psi_{k+1} (psi_{m+1} = 0) with phi(0) = 1, branch-killing
// conditions at 0 for k < m, and asymptotic-ratio tail rows. n_intervals
// must be even; preconditions y_max >= 20, n_intervals >= 256.
Profile solve_profile_bvp(const FractionalOrder& ord, double y_max, int n_intervals);

// Weighted energy of the profile: m odd -> int y^b psi_{(m+1)/2}^2 dy,
// m even -> int y^b (psi_{m/2}^2 + psi_{m/2}'^2) dy. Stores into J_value.
double profile_energy_J(Profile& p);

// lim_{t->0} t^b d/dt[psi_m](t) extracted from the grid head by fitting the
// boundary expansion {1, y^2, y^(1-b), y^(3-b)}; a 3-node and a 4-node fit
// must agree or ExtrapolationUnstable is thrown. Stores into neumann_c.
double neumann_constant(Profile& p);

// Audit of the even boundary derivatives phi^(2k)(0), 2k <= m: measured
// value vs the two published predictions (which disagree; we flag, we do
// not adjudicate).
std::vector<BoundaryDerivativeRow> boundary_derivative_table(const Profile& p);

// RMS over interior nodes of psi_k'' + ((a+2k)/y) psi_k' - psi_k, the
// second-order equation the k-th cascade member must satisfy.
double cascade_residual_profile(const Profile& p, int k);

// psi_k at arbitrary y >= 0: Macdonald evaluation for the closed-form
// route; cubic interpolation in s = sqrt(y/y_max) plus an asymptotic tail
// for the BVP route.
double eval_cascade(const Profile& p, int k, double y);

// L_b u = u'' + (w/y) u' - u applied to a grid function by the same
// finite-difference stencils the BVP uses. The mesh head (y = 0 and the
// three nodes after it) is handled by a local fit that knows the leading
// non-even power of u; branch_exponent names it, and any non-positive
// value means the solution branch 2*gamma. Chained applications should
// pass the branch of the iterate actually being differentiated
// (2*gamma - 2k for the k-th).
std::vector<double> apply_profile_operator(const Profile& p,
                                           const std::vector<double>& values,
                                           double weight,
                                           double branch_exponent = 0.0);

// CSV export: header y,phi,dphi,d2phi,Lb_phi,... one row per node,
// 17 significant digits.
void write_profile_csv(const Profile& p, std::ostream& out);
void write_profile_csv(const Profile& p, const std::string& path);

}  // namespace fraclab
