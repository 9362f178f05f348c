// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Every subcommand emits one report on stdout --
// JSON (schema fraclab-report/1) or the matching CSV artifact -- and the
// exit code says what happened: 0 success/all-pass, 1 a check failed or a
// computation error, 2 bad usage. Reports carry no timestamps or absolute
// paths, so identical configurations produce byte-identical output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclab/audit.hpp"
#include "fraclab/config.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/field.hpp"
#include "fraclab/frequency.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/order.hpp"
#include "fraclab/profile.hpp"
#include "fraclab/spectral.hpp"

namespace {

using nlohmann::json;
using namespace fraclab;

constexpr double kPi = 3.14159265358979323846;

json preamble(const char* command, const RunConfig& cfg) {
  json j;
  j["schema"] = "fraclab-report/1";
  j["command"] = command;
  j["seed"] = cfg.seed;
  return j;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::vector<double> csv_column(const std::string& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read signal file " + path);
  std::vector<double> v;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      v.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw UsageError("signal file " + path + ": bad value '" + line + "'");
    }
  }
  if (v.size() != expected)
    throw UsageError("signal file " + path + " holds " + std::to_string(v.size()) +
                     " values, grid needs " + std::to_string(expected));
  return v;
}

BoundaryFunction build_trace(const RunConfig& cfg, const XGrid& g) {
  switch (cfg.signal.kind) {
    case SignalSpec::Kind::cosine:
      return make_cosine(g, cfg.signal.mode);
    case SignalSpec::Kind::gaussian:
      return make_gaussian(g, cfg.signal.sigma);
    case SignalSpec::Kind::csv:
      return BoundaryFunction{g, csv_column(cfg.signal.path, g.total_points())};
  }
  throw UsageError("unreachable signal kind");
}

std::string signal_name(const RunConfig& cfg) {
  switch (cfg.signal.kind) {
    case SignalSpec::Kind::cosine:
      return "cosine:" + std::to_string(cfg.signal.mode);
    case SignalSpec::Kind::gaussian:
      return "gaussian:" + std::to_string(cfg.signal.sigma);
    default:
      return "csv:" + cfg.signal.path;
  }
}

int run_profile(const RunConfig& cfg) {
  Profile p = solve_profile_closed_form(make_order(cfg.gamma), cfg.y_max, cfg.ny);
  if (cfg.format == ReportFormat::csv) {
    write_profile_csv(p, std::cout);
    return 0;
  }
  json j = preamble("profile", cfg);
  j["gamma"] = cfg.gamma;
  j["m"] = p.ord.m;
  j["a"] = p.ord.a;
  j["b"] = p.ord.b;
  j["y_max"] = cfg.y_max;
  j["ny"] = cfg.ny;
  j["J"] = p.J_value;
  j["neumann_c"] = p.neumann_c;
  json res = json::array();
  for (int k = 0; k <= p.ord.m; ++k) res.push_back(cascade_residual_profile(p, k));
  j["cascade_residuals"] = res;
  emit(j);
  return 0;
}

int run_extend(const RunConfig& cfg) {
  XGrid g = make_grid(1, cfg.nx, 2.0 * kPi);
  Profile p = solve_profile_closed_form(make_order(cfg.gamma), cfg.y_max, cfg.ny);
  HalfSpaceField u = extend(build_trace(cfg, g), p);
  if (cfg.format == ReportFormat::csv) {
    write_field_csv(u, std::cout);
    return 0;
  }
  json j = preamble("extend", cfg);
  j["gamma"] = cfg.gamma;
  j["signal"] = signal_name(cfg);
  j["nx"] = cfg.nx;
  j["ny"] = cfg.ny;
  j["y_max"] = cfg.y_max;
  j["equation1_residual"] = equation1_residual(u);
  json odd = json::array();
  for (int k = 0; k < u.ord.m; ++k) odd.push_back(odd_trace_residual(u, k));
  j["odd_trace_residuals"] = odd;
  emit(j);
  return 0;
}

int run_verify_energy(const RunConfig& cfg) {
  XGrid g = make_grid(1, cfg.nx, 2.0 * kPi);
  Profile p = solve_profile_closed_form(make_order(cfg.gamma), cfg.y_max, cfg.ny);
  EnergyReport rep = extension_energy(extend(build_trace(cfg, g), p));
  const double expected = g.period * p.J_value;
  const bool pass = std::abs(rep.ratio - expected) / expected < 1e-3;
  json j = preamble("verify-energy", cfg);
  j["gamma"] = cfg.gamma;
  j["m"] = rep.ord.m;
  j["b"] = rep.ord.b;
  j["lhs"] = rep.lhs;
  j["rhs"] = rep.rhs;
  j["ratio"] = rep.ratio;
  j["J_expected"] = rep.J_expected;
  j["expected_ratio"] = expected;
  j["nx"] = cfg.nx;
  j["ny"] = cfg.ny;
  j["signal"] = signal_name(cfg);
  j["pass"] = pass;
  emit(j);
  return pass ? 0 : 1;
}

int run_neumann(const RunConfig& cfg) {
  XGrid g = make_grid(1, cfg.nx, 2.0 * kPi);
  BoundaryFunction f = build_trace(cfg, g);
  Profile p = solve_profile_closed_form(make_order(cfg.gamma), cfg.y_max, cfg.ny);
  HalfSpaceField u = extend(f, p);
  BoundaryFunction num = neumann_trace(u);
  BoundaryFunction ref = frac_laplacian_spectral(f, u.ord);
  if (cfg.format == ReportFormat::csv) {
    std::printf("x,neumann_over_c,spectral\n");
    for (std::size_t i = 0; i < num.values.size(); ++i)
      std::printf("%.17g,%.17g,%.17g\n", g.coord(i), num.values[i] / u.profile_neumann_c,
                  ref.values[i]);
    return 0;
  }
  double num2 = 0.0, ref2 = 0.0;
  for (std::size_t i = 0; i < ref.values.size(); ++i) {
    const double diff = num.values[i] / u.profile_neumann_c - ref.values[i];
    num2 += diff * diff;
    ref2 += ref.values[i] * ref.values[i];
  }
  const double rel = std::sqrt(num2 / ref2);
  const bool pass = rel < 1e-3;
  json j = preamble("neumann", cfg);
  j["gamma"] = cfg.gamma;
  j["signal"] = signal_name(cfg);
  j["nx"] = cfg.nx;
  j["ny"] = cfg.ny;
  j["neumann_c"] = u.profile_neumann_c;
  j["relative_l2_error"] = rel;
  j["pass"] = pass;
  emit(j);
  return pass ? 0 : 1;
}

int run_regularized_energy(const RunConfig& cfg) {
  XGrid g = make_grid(1, cfg.nx, 2.0 * kPi);
  Profile p = solve_profile_closed_form(make_order(cfg.gamma), cfg.y_max, cfg.ny);
  HalfSpaceField u = extend(build_trace(cfg, g), p);
  const std::vector<double> eps = {0.4, 0.2, 0.1, 0.05, 0.025};
  RegularizedEnergyReport rep = regularized_energy_limit(u, eps);
  const double rel =
      std::abs(rep.extrapolated_limit - rep.bulk_energy_half) / rep.bulk_energy_half;
  const bool pass = rel < 1e-2;
  json j = preamble("regularized-energy", cfg);
  j["gamma"] = cfg.gamma;
  j["signal"] = signal_name(cfg);
  j["epsilons"] = rep.epsilons;
  j["finite_part_estimates"] = rep.finite_part_estimates;
  j["extrapolated_limit"] = rep.extrapolated_limit;
  j["bulk_energy_half"] = rep.bulk_energy_half;
  j["relative_error"] = rel;
  j["pass"] = pass;
  emit(j);
  return pass ? 0 : 1;
}

int run_frequency(const RunConfig& cfg) {
  XGrid g = make_grid(1, cfg.nx, 2.0 * kPi);
  Profile p = solve_profile_closed_form(make_order(cfg.gamma), cfg.y_max, cfg.ny);
  HalfSpaceField u = extend(build_trace(cfg, g), p);
  std::vector<double> radii(cfg.n_radii);
  for (int i = 0; i < cfg.n_radii; ++i)
    radii[i] = cfg.r_min + (cfg.r_max - cfg.r_min) * i / (cfg.n_radii - 1);
  FrequencyReport rep = frequency_scan(u, cfg.center_x, cfg.center_y, radii);
  if (cfg.format == ReportFormat::csv) {
    write_frequency_csv(rep, std::cout);
    return 0;
  }
  json j = preamble("frequency", cfg);
  j["gamma"] = cfg.gamma;
  j["signal"] = signal_name(cfg);
  j["center"] = {rep.center_x, rep.center_y};
  j["b"] = rep.b;
  j["m"] = rep.m;
  j["radii"] = rep.radii;
  j["D"] = rep.D_values;
  j["H"] = rep.H_values;
  j["N"] = rep.N_values;
  j["lambda_estimate"] = rep.lambda_estimate;
  j["margins"] = rep.margins;
  emit(j);
  return 0;
}

int run_vanishing_order(const RunConfig& cfg) {
  XGrid g = make_grid(1, cfg.nx, 2.0 * kPi);
  BoundaryFunction f = build_trace(cfg, g);
  std::vector<double> radii;
  for (int i = 0; i < 8; ++i) radii.push_back(0.4 * std::pow(2.0, -0.5 * i));
  const double order = vanishing_order(f, cfg.x0, radii);
  json j = preamble("vanishing-order", cfg);
  j["signal"] = signal_name(cfg);
  j["x0"] = cfg.x0;
  j["radii"] = radii;
  j["estimated_order"] = order;
  emit(j);
  return 0;
}

int run_full_audit(const RunConfig& cfg) {
  AuditOptions opt;
  opt.gammas = cfg.gammas;
  opt.nx = cfg.nx;
  opt.ny = cfg.ny;
  opt.y_max = cfg.y_max;
  opt.j_scale = cfg.j_scale;
  AuditSummary s = run_full_audit(opt);

  json j = preamble("full-audit", cfg);
  j["gammas"] = cfg.gammas;
  j["nx"] = cfg.nx;
  j["ny"] = cfg.ny;
  j["y_max"] = cfg.y_max;
  json rows = json::array();
  for (const AuditCheck& c : s.checks) {
    json row;
    row["name"] = c.name;
    row["pass"] = c.pass;
    row["measured"] = c.measured;
    row["tolerance"] = c.tolerance;
    row["source"] = c.source;
    row["detail"] = c.detail;
    rows.push_back(row);
  }
  j["checks"] = rows;
  j["all_pass"] = s.all_pass();

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw UsageError("cannot create output directory " + cfg.output_dir);
  std::ofstream jf(cfg.output_dir + "/audit.json");
  if (!jf) throw UsageError("cannot write " + cfg.output_dir + "/audit.json");
  jf << j.dump(2) << '\n';
  write_audit_csv(s, cfg.output_dir + "/audit.csv");

  if (cfg.format == ReportFormat::csv)
    write_audit_csv(s, std::cout);
  else
    emit(j);
  return s.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    RunConfig cfg = parse_config(argc, argv);
    if (cfg.help_requested) {
      std::fputs(cfg.help_text.c_str(), stdout);
      return 0;
    }
    switch (cfg.command) {
      case Command::profile:
        return run_profile(cfg);
      case Command::extend:
        return run_extend(cfg);
      case Command::verify_energy:
        return run_verify_energy(cfg);
      case Command::neumann:
        return run_neumann(cfg);
      case Command::regularized_energy:
        return run_regularized_energy(cfg);
      case Command::frequency:
        return run_frequency(cfg);
      case Command::vanishing_order:
        return run_vanishing_order(cfg);
      case Command::full_audit:
        return run_full_audit(cfg);
    }
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
