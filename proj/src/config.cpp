// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#include "fraclab/config.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

bool power_of_two(long v) { return v >= 8 && (v & (v - 1)) == 0; }

void require_fractional(double gamma, const char* what) {
  if (!(gamma > 0.0))
    throw UsageError(std::string(what) + " must be positive, got " + std::to_string(gamma));
  if (std::abs(gamma - std::round(gamma)) < 1e-12)
    throw UsageError(std::string(what) + " must be non-integer, got " +
                     std::to_string(gamma));
}

// Flat-namespace JSON config. Every key maps onto one RunConfig field;
// anything unrecognized is a hard error so typos cannot silently fall
// back to defaults.
void apply_config_file(const std::string& path, RunConfig& cfg, std::string& signal_raw,
                       std::string& format_raw) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw UsageError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config file: top level must be an object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "gamma") cfg.gamma = value.get<double>();
      else if (key == "gammas") cfg.gammas = value.get<std::vector<double>>();
      else if (key == "nx") cfg.nx = value.get<int>();
      else if (key == "ny") cfg.ny = value.get<int>();
      else if (key == "y_max") cfg.y_max = value.get<double>();
      else if (key == "signal") signal_raw = value.get<std::string>();
      else if (key == "output_dir") cfg.output_dir = value.get<std::string>();
      else if (key == "seed") cfg.seed = value.get<long>();
      else if (key == "format") format_raw = value.get<std::string>();
      else if (key == "center_x") cfg.center_x = value.get<double>();
      else if (key == "center_y") cfg.center_y = value.get<double>();
      else if (key == "r_min") cfg.r_min = value.get<double>();
      else if (key == "r_max") cfg.r_max = value.get<double>();
      else if (key == "n_radii") cfg.n_radii = value.get<int>();
      else if (key == "x0") cfg.x0 = value.get<double>();
      else throw UsageError("config file: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file: key '" + key + "': " + e.what());
    }
  }
}

}  // namespace

SignalSpec parse_signal_spec(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos || colon + 1 == text.size())
    throw UsageError("signal must look like cosine:K, gaussian:SIGMA, or csv:PATH; got '" +
                     text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  SignalSpec s;
  try {
    if (kind == "cosine") {
      s.kind = SignalSpec::Kind::cosine;
      s.mode = std::stoi(arg);
      if (s.mode < 0) throw UsageError("cosine mode must be >= 0");
    } else if (kind == "gaussian") {
      s.kind = SignalSpec::Kind::gaussian;
      s.sigma = std::stod(arg);
      if (!(s.sigma > 0.0)) throw UsageError("gaussian sigma must be positive");
    } else if (kind == "csv") {
      s.kind = SignalSpec::Kind::csv;
      s.path = arg;
    } else {
      throw UsageError("unknown signal kind '" + kind + "'");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("cannot parse signal argument '" + arg + "'");
  }
  return s;
}

RunConfig parse_config(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string signal_raw = "cosine:1";
  std::string format_raw = "json";

  // The config file loads before flag binding, so file values become the
  // defaults the flags override.
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      apply_config_file(argv[i + 1], cfg, signal_raw, format_raw);
      break;
    }
    if (a.rfind("--config=", 0) == 0) {
      apply_config_file(a.substr(9), cfg, signal_raw, format_raw);
      break;
    }
  }

  CLI::App app{"numerical laboratory for the high-order fractional Laplacian extension"};
  app.require_subcommand(1);
  std::string config_path;  // consumed above; registered so parsing accepts it

  struct SubEntry {
    const char* name;
    const char* blurb;
    Command cmd;
  };
  const SubEntry subs[] = {
      {"profile", "solve the per-frequency profile ODE cascade", Command::profile},
      {"extend", "assemble the half-space extension of a trace", Command::extend},
      {"verify-energy", "check the trace-energy identity for one order", Command::verify_energy},
      {"neumann", "compare the weighted Neumann trace with the spectral operator",
       Command::neumann},
      {"regularized-energy", "finite-part energy limit at order 3/2", Command::regularized_energy},
      {"frequency", "Almgren frequency scan over balls", Command::frequency},
      {"vanishing-order", "estimate the vanishing order of a trace", Command::vanishing_order},
      {"full-audit", "run the complete verification suite", Command::full_audit},
  };

  for (const SubEntry& se : subs) {
    CLI::App* sub = app.add_subcommand(se.name, se.blurb);
    sub->parse_complete_callback([&cfg, cmd = se.cmd] { cfg.command = cmd; });
    sub->add_option("--config", config_path, "JSON config file (flat keys; flags override)");
    sub->add_option("--gamma", cfg.gamma, "fractional order")->capture_default_str();
    sub->add_option("--nx", cfg.nx, "x-grid points (power of two)")->capture_default_str();
    sub->add_option("--ny", cfg.ny, "y-grid intervals (power of two)")->capture_default_str();
    sub->add_option("--y-max", cfg.y_max, "slab height")->capture_default_str();
    sub->add_option("--signal", signal_raw, "trace: cosine:K | gaussian:SIGMA | csv:PATH")
        ->capture_default_str();
    sub->add_option("--output-dir", cfg.output_dir, "artifact directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed echoed into reports")->capture_default_str();
    sub->add_option("--format", format_raw, "report format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    if (se.cmd == Command::full_audit) {
      sub->add_option("--gammas", cfg.gammas, "orders for the sweep checks")
          ->delimiter(',')
          ->capture_default_str();
      sub->add_option("--inject-j-scale", cfg.j_scale,
                      "scale the expected energy constant (fault injection)")
          ->group("");
    }
    if (se.cmd == Command::frequency) {
      sub->add_option("--center-x", cfg.center_x, "ball center, x")->capture_default_str();
      sub->add_option("--center-y", cfg.center_y, "ball center, y (0 = boundary half-ball)")
          ->capture_default_str();
      sub->add_option("--r-min", cfg.r_min, "smallest radius")->capture_default_str();
      sub->add_option("--r-max", cfg.r_max, "largest radius")->capture_default_str();
      sub->add_option("--n-radii", cfg.n_radii, "number of radii")->capture_default_str();
    }
    if (se.cmd == Command::vanishing_order)
      sub->add_option("--x0", cfg.x0, "center of the shrinking balls")->capture_default_str();
  }

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    cfg.help_requested = true;
    cfg.help_text = app.help();
    return cfg;
  } catch (const CLI::CallForAllHelp&) {
    cfg.help_requested = true;
    cfg.help_text = app.help("", CLI::AppFormatMode::All);
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!power_of_two(cfg.nx)) throw UsageError("--nx must be a power of two >= 8");
  if (!power_of_two(cfg.ny)) throw UsageError("--ny must be a power of two >= 8");
  if (!(cfg.y_max > 0.0)) throw UsageError("--y-max must be positive");
  cfg.format = format_raw == "csv" ? ReportFormat::csv : ReportFormat::json;
  cfg.signal = parse_signal_spec(signal_raw);
  if (cfg.signal.kind == SignalSpec::Kind::cosine && cfg.signal.mode >= cfg.nx / 2)
    throw UsageError("cosine mode " + std::to_string(cfg.signal.mode) +
                     " is at or above the Nyquist limit for nx=" + std::to_string(cfg.nx));

  if (cfg.command == Command::full_audit) {
    if (cfg.gammas.empty()) throw UsageError("--gammas must not be empty");
    for (double g : cfg.gammas) require_fractional(g, "--gammas entry");
  } else if (cfg.command != Command::vanishing_order) {
    require_fractional(cfg.gamma, "--gamma");
  }
  if (cfg.command == Command::frequency) {
    if (!(cfg.r_min > 0.0) || !(cfg.r_max > cfg.r_min))
      throw UsageError("need 0 < --r-min < --r-max");
    if (cfg.n_radii < 2) throw UsageError("--n-radii must be at least 2");
    if (cfg.center_y < 0.0) throw UsageError("--center-y must be >= 0");
  }
  return cfg;
}

}  // namespace fraclab
