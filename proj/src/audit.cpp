// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/audit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "fraclab/errors.hpp"
#include "fraclab/field.hpp"
#include "fraclab/frequency.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/order.hpp"
#include "fraclab/profile.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// The three orders with elementary profiles, and those profiles.
double elementary_profile(double gamma, double y) {
  if (gamma == 0.5) return std::exp(-y);
  if (gamma == 1.5) return (1.0 + y) * std::exp(-y);
  return std::exp(-y) * (1.0 + y + y * y / 3.0);  // gamma = 2.5
}

double elementary_J(double gamma) {
  if (gamma == 0.5) return 1.0;
  if (gamma == 1.5) return 2.0;
  return 8.0 / 3.0;
}

// Single-iterate field holding f(x, y) on the usual graded slab. The order
// only matters through its weight b (it selects the quadrature weight and
// the branch the derivative stencils protect).
HalfSpaceField synth_field(const XGrid& g, const FractionalOrder& ord, double y_top,
                           int ny, double (*f)(double, double)) {
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
      w.iterates[0][j * nx + i] = f(g.coord(i), w.y_grid[j]);
  return w;
}

std::vector<double> scan_radii() {
  std::vector<double> r;
  for (int i = 0; i < 17; ++i) r.push_back(0.1 + 0.05 * i);
  return r;
}

// ---- the ten checks ------------------------------------------------------

AuditCheck check_profile_closed_forms(const AuditOptions&) {
  AuditCheck c{"01-profile-closed-forms", false, 0.0, 1e-6, "closed-form", ""};
  std::ostringstream d;
  for (double g : {0.5, 1.5, 2.5}) {
    Profile p = solve_profile_bvp(make_order(g), 30.0, 2048);
    double sup = 0.0;
    for (std::size_t j = 0; j < p.nodes() && p.y_grid[j] <= 12.0; ++j)
      sup = std::max(sup, std::abs(p.phi()[j] - elementary_profile(g, p.y_grid[j])));
    c.measured = std::max(c.measured, sup);
    d << fmt("g=%.1f sup=%.2e; ", g, sup);
  }
  c.pass = c.measured < c.tolerance;
  c.detail = d.str();
  return c;
}

AuditCheck check_energy_constant(const AuditOptions&) {
  AuditCheck c{"02-energy-constant", false, 0.0, 1e-6, "oracle", ""};
  std::ostringstream d;
  for (double g : {0.5, 1.5, 2.5}) {
    Profile p = solve_profile_closed_form(make_order(g), 30.0, 2048);
    const double err = std::abs(p.J_value - elementary_J(g));
    c.measured = std::max(c.measured, err);
    d << fmt("g=%.1f J=%.9f err=%.2e; ", g, p.J_value, err);
  }
  c.pass = c.measured < c.tolerance;
  c.detail = d.str();
  return c;
}

AuditCheck check_energy_identity(const AuditOptions& opt) {
  AuditCheck c{"03-energy-identity", false, 0.0, 1e-3, "identity", ""};
  std::ostringstream d;
  XGrid g = make_grid(1, opt.nx, 2.0 * kPi);
  std::vector<BoundaryFunction> traces = {make_cosine(g, 1), make_cosine(g, 2),
                                          make_cosine(g, 3), make_gaussian(g, 0.5),
                                          make_gaussian(g, 0.8)};
  for (double gamma : opt.gammas) {
    Profile p = solve_profile_closed_form(make_order(gamma), opt.y_max, opt.ny);
    std::vector<double> ratios;
    for (const BoundaryFunction& f : traces)
      ratios.push_back(extension_energy(extend(f, p)).ratio);
    double mean = 0.0;
    for (double r : ratios) mean += r;
    mean /= ratios.size();
    double var = 0.0;
    for (double r : ratios) var += (r - mean) * (r - mean);
    const double rel_sd = std::sqrt(var / ratios.size()) / mean;
    const double expected =
        std::pow(g.period, static_cast<double>(g.n_dim)) * p.J_value * opt.j_scale;
    const double mean_err = std::abs(mean - expected) / expected;
    c.measured = std::max({c.measured, rel_sd, mean_err});
    d << fmt("g=%.1f sd=%.2e mean_err=%.2e; ", gamma, rel_sd, mean_err);
  }
  c.pass = c.measured < c.tolerance;
  c.detail = d.str();
  return c;
}

AuditCheck check_neumann_vs_spectral(const AuditOptions& opt) {
  AuditCheck c{"04-neumann-vs-spectral", false, 0.0, 1e-3, "identity", ""};
  std::ostringstream d;
  XGrid g = make_grid(1, opt.nx, 2.0 * kPi);
  BoundaryFunction f = make_gaussian(g, 0.5);
  bool in_time = true;
  for (double gamma : opt.gammas) {
    const auto t0 = std::chrono::steady_clock::now();
    Profile p = solve_profile_closed_form(make_order(gamma), opt.y_max, opt.ny);
    HalfSpaceField u = extend(f, p);
    BoundaryFunction num = neumann_trace(u);
    BoundaryFunction ref = frac_laplacian_spectral(f, u.ord);
    double num2 = 0.0, ref2 = 0.0;
    for (std::size_t i = 0; i < ref.values.size(); ++i) {
      const double diff = num.values[i] / u.profile_neumann_c - ref.values[i];
      num2 += diff * diff;
      ref2 += ref.values[i] * ref.values[i];
    }
    const double rel = std::sqrt(num2 / ref2);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 60.0) in_time = false;
    c.measured = std::max(c.measured, rel);
    d << fmt("g=%.1f rel=%.2e %.1fs; ", gamma, rel, secs);
  }
  c.pass = c.measured < c.tolerance && in_time;
  c.detail = d.str();
  return c;
}

AuditCheck check_regularized_energy(const AuditOptions& opt) {
  AuditCheck c{"05-regularized-energy", false, 0.0, 1e-2, "identity", ""};
  XGrid g = make_grid(1, opt.nx, 2.0 * kPi);
  BoundaryFunction f = make_cosine(g, 1);
  Profile p = solve_profile_closed_form(make_order(1.5), opt.y_max, opt.ny);
  HalfSpaceField u = extend(f, p);
  // Independent target: half the weighted bulk energy via the spectral
  // side of the identity, (C/2) J |f|^2_gamma.
  const double target =
      0.5 * g.period * p.J_value * hgamma_seminorm_sq(dft_forward(f), u.ord);
  RegularizedEnergyReport coarse = regularized_energy_limit(u, {0.4, 0.2, 0.1});
  RegularizedEnergyReport fine = regularized_energy_limit(u, {0.2, 0.1, 0.05, 0.025});
  const double disc_coarse = std::abs(coarse.extrapolated_limit - target) / target;
  const double disc_fine = std::abs(fine.extrapolated_limit - target) / target;
  c.measured = disc_fine;
  c.pass = disc_fine < c.tolerance && disc_fine < disc_coarse;
  c.detail = fmt("limit=%.9f target=%.9f disc_fine=%.2e disc_coarse=%.2e shrink=%.1fx",
                 fine.extrapolated_limit, target, disc_fine, disc_coarse,
                 disc_coarse / disc_fine);
  return c;
}

AuditCheck check_cascade_and_traces(const AuditOptions& opt) {
  // Composite row: measured is the worst residual/bar ratio.
  AuditCheck c{"06-cascade-and-traces", false, 0.0, 1.0, "closed-form", ""};
  std::ostringstream d;
  for (double g : {0.5, 1.5, 2.5}) {
    Profile p = solve_profile_closed_form(make_order(g), 30.0, 2048);
    for (int k = 0; k <= p.ord.m; ++k) {
      const double res = cascade_residual_profile(p, k);
      c.measured = std::max(c.measured, res / 1e-6);
      d << fmt("casc g=%.1f k=%d %.1e; ", g, k, res);
    }
  }
  XGrid g = make_grid(1, 256, 2.0 * kPi);
  BoundaryFunction f = make_gaussian(g, 0.5);
  for (double gamma : {1.5, 2.7}) {
    FractionalOrder ord = make_order(gamma);
    Profile p_half = solve_profile_closed_form(ord, opt.y_max, 512);
    Profile p_full = solve_profile_closed_form(ord, opt.y_max, 1024);
    HalfSpaceField u_half = extend(f, p_half);
    HalfSpaceField u_full = extend(f, p_full);
    for (int k = 0; k < ord.m; ++k) {
      const double r_half = odd_trace_residual(u_half, k);
      const double r_full = odd_trace_residual(u_full, k);
      c.measured = std::max({c.measured, r_full / 1e-4, 3.0 * r_full / r_half});
      d << fmt("odd g=%.1f k=%d %.1e (x%.1f); ", gamma, k, r_full, r_half / r_full);
    }
    const double eq1 = equation1_residual(u_full);
    c.measured = std::max(c.measured, eq1 / 1e-5);
    d << fmt("eq1 g=%.1f %.1e; ", gamma, eq1);
  }
  c.pass = c.measured < c.tolerance;
  c.detail = d.str();
  return c;
}

namespace fields {
double axis(double x, double) { return x - kPi; }
double ysq(double, double y) { return y * y; }
// Harmonic and degree-2 homogeneous about the interior test center.
double saddle(double x, double y) {
  return (x - kPi) * (x - kPi) - (y - 1.3) * (y - 1.3);
}
double harm(double x, double y) { return std::sin(x) * std::exp(-y); }
double zero(double, double) { return 0.0; }
double ysq_src(double, double) { return 2.0 + 2.0 * 0.4; }  // Delta_b y^2, b = 0.4
}  // namespace fields

AuditCheck check_rellich_and_dk(const AuditOptions& opt) {
  AuditCheck c{"07-rellich-and-dk", false, 0.0, 1.0, "refinement", ""};
  std::ostringstream d;
  XGrid g = make_grid(1, 512, 2.0 * kPi);
  const FractionalOrder flat = make_order(0.5);  // b = 0
  const FractionalOrder tilted = make_order(1.3);  // b = 0.4
  HalfSpaceField none = synth_field(g, flat, 4.0, 512, fields::zero);

  // Polynomial set: machine-exact cases across both validity domains.
  {
    HalfSpaceField w = synth_field(g, flat, 4.0, 512, fields::axis);
    BallQuadrature q = make_ball_quadrature(kPi, 1.3, 0.7, 0.0, 48, 64);
    const double r = rellich_residual(w, none, q);
    c.measured = std::max(c.measured, r / 1e-6);
    d << fmt("x1 %.1e; ", r);
  }
  {
    HalfSpaceField w = synth_field(g, tilted, 4.0, 512, fields::ysq);
    HalfSpaceField v = synth_field(g, tilted, 4.0, 512, fields::ysq_src);
    BallQuadrature q = make_ball_quadrature(kPi, 0.0, 0.8, tilted.b, 48, 64);
    const double r = rellich_residual(w, v, q);
    c.measured = std::max(c.measured, r / 1e-6);
    d << fmt("y2 %.1e; ", r);
  }
  {
    HalfSpaceField w = synth_field(g, flat, 4.0, 512, fields::saddle);
    BallQuadrature q = make_ball_quadrature(kPi, 1.3, 0.7, 0.0, 48, 64);
    const double r = rellich_residual(w, none, q);
    c.measured = std::max(c.measured, r / 1e-6);
    d << fmt("saddle %.1e; ", r);
  }

  // Quadrupling the node count (doubling each direction) in the regime
  // where quadrature truncation dominates.
  {
    HalfSpaceField w = synth_field(g, flat, 4.0, 512, fields::harm);
    BallQuadrature qc = make_ball_quadrature(kPi, 1.3, 0.7, 0.0, 4, 8);
    BallQuadrature qf = make_ball_quadrature(kPi, 1.3, 0.7, 0.0, 8, 16);
    const double rc = rellich_residual(w, none, qc);
    const double rf = rellich_residual(w, none, qf);
    c.measured = std::max(c.measured, 4.0 * rf / rc);
    d << fmt("rellich-refine x%.0f; ", rc / rf);
  }

  // D_k volume/surface agreement on genuine extensions.
  XGrid gx = make_grid(1, 256, 2.0 * kPi);
  BoundaryFunction f = make_cosine(gx, 1);
  {
    Profile p = solve_profile_closed_form(make_order(1.5), opt.y_max, opt.ny);
    HalfSpaceField u = extend(f, p);
    BallQuadrature qi = make_ball_quadrature(kPi, 1.0, 0.5, u.ord.b, 32, 64);
    BallQuadrature qh = make_ball_quadrature(kPi, 0.0, 0.5, u.ord.b, 48, 64);
    for (int k = 0; k <= u.ord.m; ++k) {
      const double r = dk_boundary_identity_residual(u, qi, k);
      c.measured = std::max(c.measured, r / 1e-4);
      d << fmt("dk g=1.5 k=%d %.1e; ", k, r);
    }
    const double rh = dk_boundary_identity_residual(u, qh, 0);
    c.measured = std::max(c.measured, rh / 1e-4);
    d << fmt("dk-half %.1e; ", rh);
    BallQuadrature qc = make_ball_quadrature(kPi, 1.0, 0.5, u.ord.b, 4, 8);
    BallQuadrature qf = make_ball_quadrature(kPi, 1.0, 0.5, u.ord.b, 8, 16);
    const double rc = dk_boundary_identity_residual(u, qc, 0);
    const double rf = dk_boundary_identity_residual(u, qf, 0);
    c.measured = std::max(c.measured, 4.0 * rf / rc);
    d << fmt("dk-refine x%.0f; ", rc / rf);
  }
  {
    Profile p = solve_profile_closed_form(tilted, opt.y_max, opt.ny);
    HalfSpaceField u = extend(f, p);
    BallQuadrature qi = make_ball_quadrature(kPi, 1.0, 0.5, u.ord.b, 32, 64);
    const double r = dk_boundary_identity_residual(u, qi, 0);
    c.measured = std::max(c.measured, r / 1e-4);
    d << fmt("dk g=1.3 %.1e; ", r);
  }
  c.pass = c.measured < c.tolerance;
  c.detail = d.str();
  return c;
}

AuditCheck check_frequency_function(const AuditOptions& opt) {
  AuditCheck c{"08-frequency-function", false, 0.0, 1.0, "identity", ""};
  std::ostringstream d;
  XGrid g = make_grid(1, 512, 2.0 * kPi);
  const FractionalOrder flat = make_order(0.5);
  for (int deg = 1; deg <= 2; ++deg) {
    HalfSpaceField w =
        synth_field(g, flat, 4.0, 512, deg == 1 ? fields::axis : fields::saddle);
    // N needs the source iterate too; these are harmonic, so it is zero.
    w.iterates.emplace_back(w.iterates[0].size(), 0.0);
    for (double r : {0.3, 0.6, 0.9}) {
      BallQuadrature q = make_ball_quadrature(kPi, 1.3, r, 0.0, 48, 64);
      const double err = std::abs(compute_N(w, q) - deg);
      c.measured = std::max(c.measured, err / 1e-3);
      d << fmt("N(deg%d,r=%.1f) err=%.1e; ", deg, r, err);
    }
  }
  XGrid gx = make_grid(1, 256, 2.0 * kPi);
  BoundaryFunction f = make_gaussian(gx, 0.5);
  for (double gamma : {1.5, 1.3, 2.7}) {
    Profile p = solve_profile_closed_form(make_order(gamma), opt.y_max, opt.ny);
    HalfSpaceField u = extend(f, p);
    FrequencyReport rep = frequency_scan(u, kPi, 0.0, scan_radii());
    MonotonicityResult mono = monotonicity_check(rep, rep.lambda_estimate);
    c.measured = std::max({c.measured, rep.lambda_estimate / 50.0, mono.ok ? 0.0 : 2.0});
    d << fmt("g=%.1f lambda=%.2f mono=%d; ", gamma, rep.lambda_estimate, (int)mono.ok);
  }
  c.pass = c.measured < c.tolerance;
  c.detail = d.str();
  return c;
}

AuditCheck check_vanishing_order(const AuditOptions&) {
  AuditCheck c{"09-vanishing-order", false, 0.0, 0.2, "oracle", ""};
  std::ostringstream d;
  XGrid g = make_grid(1, 4096, 2.0 * kPi);
  std::vector<double> radii;
  for (int i = 0; i < 8; ++i) radii.push_back(0.4 * std::pow(2.0, -0.5 * i));
  const double planted[3] = {1.0, 2.0, 4.0};
  for (int which = 0; which < 3; ++which) {
    BoundaryFunction f{g, std::vector<double>(g.total_points())};
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      const double t = g.coord(i) - kPi;
      f.values[i] = which == 0 ? 1.0 : (which == 1 ? t : t * t * t);
    }
    const double slope = vanishing_order(f, kPi, radii);
    c.measured = std::max(c.measured, std::abs(slope - planted[which]));
    d << fmt("planted=%.0f slope=%.4f; ", planted[which], slope);
  }
  c.pass = c.measured < c.tolerance;
  c.detail = d.str();
  return c;
}

AuditCheck check_boundary_derivative_audit(const AuditOptions&) {
  AuditCheck c{"10-boundary-derivative-audit", false, 0.0, 1.0, "table", ""};
  std::ostringstream d;
  int flagged = 0;
  for (double g : {1.5, 2.5, 2.7}) {
    Profile p = solve_profile_closed_form(make_order(g), 30.0, 2048);
    for (const BoundaryDerivativeRow& row : boundary_derivative_table(p)) {
      if (row.discrepant) {
        ++flagged;
        d << fmt("g=%.1f k=%d product=%.6f series=%.6f; ", g, row.k,
                 row.theorem_product, row.frobenius);
      }
    }
  }
  // The two published predictions disagree for orders above 2; the audit
  // must surface that disagreement, not fail on it.
  c.measured = flagged;
  c.pass = flagged >= 1;
  c.detail = flagged ? d.str() : "no discrepant rows found";
  return c;
}

}  // namespace

AuditSummary run_full_audit(const AuditOptions& opt) {
  if (opt.gammas.empty()) throw UsageError("audit requires a non-empty order list");
  using CheckFn = AuditCheck (*)(const AuditOptions&);
  struct Entry {
    const char* name;
    CheckFn fn;
  };
  const Entry entries[] = {
      {"01-profile-closed-forms", check_profile_closed_forms},
      {"02-energy-constant", check_energy_constant},
      {"03-energy-identity", check_energy_identity},
      {"04-neumann-vs-spectral", check_neumann_vs_spectral},
      {"05-regularized-energy", check_regularized_energy},
      {"06-cascade-and-traces", check_cascade_and_traces},
      {"07-rellich-and-dk", check_rellich_and_dk},
      {"08-frequency-function", check_frequency_function},
      {"09-vanishing-order", check_vanishing_order},
      {"10-boundary-derivative-audit", check_boundary_derivative_audit},
  };
  AuditSummary s;
  for (const Entry& e : entries) {
    try {
      s.checks.push_back(e.fn(opt));
    } catch (const std::exception& ex) {
      AuditCheck failed;
      failed.name = e.name;
      failed.pass = false;
      failed.measured = std::numeric_limits<double>::quiet_NaN();
      failed.source = "error";
      failed.detail = ex.what();
      s.checks.push_back(std::move(failed));
    }
  }
  return s;
}

void write_audit_csv(const AuditSummary& s, std::ostream& out) {
  out << "name,status,measured,tolerance,source,detail\n";
  for (const AuditCheck& c : s.checks) {
    std::string detail = c.detail;
    for (char& ch : detail)
      if (ch == ',') ch = ';';
    out << c.name << ',' << (c.pass ? "pass" : "fail") << ',';
    char num[64];
    std::snprintf(num, sizeof num, "%.17g,%.17g,", c.measured, c.tolerance);
    out << num << c.source << ',' << detail << '\n';
  }
}

void write_audit_csv(const AuditSummary& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot open " + path + " for writing");
  write_audit_csv(s, out);
}

}  // namespace fraclab
