// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace fraclab {

enum class Command {
  profile,
  extend,
  verify_energy,
  neumann,
  regularized_energy,
  frequency,
  vanishing_order,
  full_audit,
};

enum class ReportFormat { csv, json };

/// Boundary-data selector, written on the command line (or in a config
/// file) as "cosine:K", "gaussian:SIGMA", or "csv:PATH".
struct SignalSpec {
  enum class Kind { cosine, gaussian, csv } kind = Kind::cosine;
  int mode = 1;        // cosine
  double sigma = 0.5;  // gaussian
  std::string path;    // csv
};

/// Fully-resolved run parameters. Precedence: built-in defaults, then a
/// JSON config file (--config, flat key namespace), then flags.
struct RunConfig {
  Command command = Command::profile;
  double gamma = 1.5;
  std::vector<double> gammas{0.5, 1.3, 1.5, 2.5, 2.7};  // full-audit sweep
  int nx = 1024;
  int ny = 2048;
  double y_max = 30.0;
  SignalSpec signal;
  std::string output_dir = ".";
  long seed = 0;
  ReportFormat format = ReportFormat::json;

  // Fault injection for the audit (hidden flag --inject-j-scale): scales
  // the expected energy constant so a wrong oracle provably fails.
  double j_scale = 1.0;

  // frequency scan geometry
  double center_x = 3.14159265358979323846;
  double center_y = 0.0;
  double r_min = 0.1;
  double r_max = 0.9;
  int n_radii = 17;

  // vanishing-order center
  double x0 = 3.14159265358979323846;

  // --help was requested; help_text holds the message and the caller
  // should print it and stop instead of running the command.
  bool help_requested = false;
  std::string help_text;
};

/// Parse flags (and an optional JSON config file) into a RunConfig.
/// Throws UsageError with a one-line diagnostic on anything malformed:
/// unknown flags or keys, non-power-of-two grid sizes, integer or
/// non-positive orders, unparsable signal specs.
RunConfig parse_config(int argc, const char* const* argv);

/// Parse one "kind:value" signal spec (exposed for tests).
SignalSpec parse_signal_spec(const std::string& text);

}  // namespace fraclab
