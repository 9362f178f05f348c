// Copyright (c) 2026 fraclab developers
// SPDX-License-Identifier: Apache-2.0

// End-to-end checks of the installed binary: exit codes, report schema,
// determinism, config precedence. The binary path is injected by the build
// as FRACLAB_CLI_PATH.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Run through /bin/sh so tests can prepend environment assignments.
RunResult run(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + (env.empty() ? "" : " ") + FRACLAB_CLI_PATH + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path fresh_dir(const char* tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   (std::string("fraclab-cli-") + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("profile reports the expected constants as a schema-tagged JSON") {
  const RunResult r = run("profile --gamma 1.5 --ny 512");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("schema") == "fraclab-report/1");
  CHECK(j.at("command") == "profile");
  CHECK(j.at("m") == 1);
  CHECK(double(j.at("J")) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(double(j.at("neumann_c")) == doctest::Approx(2.0).epsilon(1e-6));
  REQUIRE(j.at("cascade_residuals").size() == 2);
  for (const auto& v : j.at("cascade_residuals")) CHECK(double(v) < 1e-6);
}

TEST_CASE("profile CSV starts with the documented header") {
  const RunResult r = run("profile --gamma 0.5 --ny 256 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("y,phi,dphi,d2phi", 0) == 0);
  CHECK(count_lines(r.out) == 258);  // header + one row per node
}

TEST_CASE("verify-energy passes on a genuine order and reports the ratio") {
  const RunResult r = run("verify-energy --gamma 1.5 --nx 256 --ny 512");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("pass") == true);
  const double want = 4.0 * std::numbers::pi;  // L * J = 2 pi * 2
  CHECK(double(j.at("ratio")) == doctest::Approx(want).epsilon(1e-3));
  CHECK(double(j.at("expected_ratio")) == doctest::Approx(want).epsilon(1e-6));
  CHECK(j.at("nx") == 256);
  CHECK(j.at("ny") == 512);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("verify-energy --gamma 2.0").exit_code == 2);   // integer order
  CHECK(run("verify-energy --gamma -0.5").exit_code == 2);  // negative order
  CHECK(run("profile --no-such-flag").exit_code == 2);
  CHECK(run("no-such-command").exit_code == 2);
  CHECK(run("extend --nx 100 --ny 512").exit_code == 2);  // not a power of two
  CHECK(run("extend --signal csv:/does/not/exist --nx 128 --ny 512").exit_code == 2);
  CHECK(run("frequency --r-min 0.9 --r-max 0.1").exit_code == 2);
  CHECK(run("extend --signal cosine:striped").exit_code == 2);
  CHECK(run("extend --signal cosine:500 --nx 128 --ny 512").exit_code == 2);  // Nyquist
}

TEST_CASE("a short CSV signal is rejected against the grid") {
  const auto dir = fresh_dir("csv");
  const auto file = dir / "trace.csv";
  std::ofstream(file) << "0.5\n0.25\n0.125\n";
  const RunResult r =
      run("extend --signal csv:" + file.string() + " --nx 128 --ny 512");
  CHECK(r.exit_code == 2);
}

TEST_CASE("help requests succeed and name the subcommands") {
  const RunResult top = run("--help");
  CHECK(top.exit_code == 0);
  CHECK(top.out.find("profile") != std::string::npos);
  CHECK(top.out.find("full-audit") != std::string::npos);
  CHECK(run("frequency --help").exit_code == 0);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const std::string args =
      "frequency --gamma 1.5 --nx 128 --ny 512 --n-radii 7";
  const RunResult a = run(args);
  const RunResult b = run(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  const RunResult c = run(args, "FRACLAB_THREADS=1");
  CHECK(c.exit_code == 0);
  CHECK(a.out == c.out);
}

TEST_CASE("the scalar kernel override is accepted") {
  const RunResult r = run("profile --gamma 1.3 --ny 512", "FRACLAB_SIMD=scalar");
  REQUIRE(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(double(j.at("J")) == doctest::Approx(1.90846819523).epsilon(1e-6));
}

TEST_CASE("config file values load and flags override them") {
  const auto dir = fresh_dir("cfg");
  const auto file = dir / "run.json";
  std::ofstream(file) << R"({"gamma": 1.3, "nx": 256, "ny": 512})";

  const RunResult base = run("verify-energy --config " + file.string());
  REQUIRE(base.exit_code == 0);
  CHECK(double(json::parse(base.out).at("gamma")) == doctest::Approx(1.3));

  const RunResult flag =
      run("verify-energy --config " + file.string() + " --gamma 2.5");
  REQUIRE(flag.exit_code == 0);
  const json j = json::parse(flag.out);
  CHECK(double(j.at("gamma")) == doctest::Approx(2.5));
  const double want = 2.0 * std::numbers::pi * 8.0 / 3.0;
  CHECK(double(j.at("ratio")) == doctest::Approx(want).epsilon(1e-3));

  std::ofstream(file) << R"({"gamma": 1.3, "unknown_key": 1})";
  CHECK(run("verify-energy --config " + file.string()).exit_code == 2);
}

TEST_CASE("neumann CSV has one row per boundary node") {
  const RunResult r =
      run("neumann --gamma 0.5 --nx 128 --ny 512 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("x,neumann_over_c,spectral", 0) == 0);
  CHECK(count_lines(r.out) == 129);
}

TEST_CASE("an injected energy-constant fault fails the audit loudly") {
  const auto dir = fresh_dir("audit");
  const RunResult r = run("full-audit --gammas 1.5 --nx 256 --ny 512 "
                          "--inject-j-scale 1.02 --output-dir " +
                          dir.string());
  CHECK(r.exit_code == 1);

  const auto report_path = dir / "audit.json";
  REQUIRE(std::filesystem::exists(report_path));
  std::ifstream in(report_path);
  const json j = json::parse(in);
  CHECK(j.at("all_pass") == false);
  bool found = false;
  for (const auto& chk : j.at("checks"))
    if (chk.at("name") == "03-energy-identity") {
      found = true;
      CHECK(chk.at("pass") == false);
    }
  CHECK(found);

  std::ifstream csv(dir / "audit.csv");
  std::string header;
  REQUIRE(std::getline(csv, header));
  CHECK(header == "name,status,measured,tolerance,source,detail");
}

TEST_CASE("the audit refuses an empty exponent list") {
  CHECK(run("full-audit --gammas ''").exit_code == 2);
}
