#pragma once

// Subcommand drivers behind the `peskin` executable. Each returns a process
// exit status: 0 pass, 2 usage or configuration error, 3 numerical failure.

#include <string>
#include <vector>

#include "peskin/config.hpp"
#include "peskin/diagnostics.hpp"
#include "peskin/dynamics.hpp"

namespace peskin {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Environment variable naming the default output root.
inline constexpr const char* kOutRootEnv = "PESKIN_OUT_ROOT";

struct CliCommand {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  bool force = false;
  int workers = 1;
};

/// $PESKIN_OUT_ROOT, or "runs" when unset.
std::string default_output_root();
/// --out, else <root>/<subcommand>[-<config stem>].
std::string resolve_out_dir(const CliCommand& cmd);

/// Config file (optional) plus overrides, resolved against the defaults.
Config load_config(const CliCommand& cmd);

/// Constants named by diagnostics.constants, else the shipped calibration.
EmpiricalConstants constants_for(const Config& cfg);

/// Simulates into `dir`: config.txt, initial.csv, records.csv, states.csv,
/// snapshot_*.csv, optional SVG plots, manifest.txt.
Trajectory simulate_into(const Config& cfg, const std::string& dir);

/// Loads a finished run directory after verifying its manifest.
Trajectory load_run(const std::string& dir);

/// Runs the check suite on a run directory and writes checks.csv and
/// summary.txt.
std::vector<CheckReport> check_into(const std::string& dir, const EmpiricalConstants& constants);

/// Spectral operators vs principal-value quadrature, Cotlar residuals, the
/// mode RHS vs its grid evaluation, and W1 vs a brute-force shift search.
std::vector<CheckReport> oracle_suite(const Config& cfg);

int run_simulate(const CliCommand& cmd);
int run_check(const CliCommand& cmd);
int run_oracle(const CliCommand& cmd);
int run_lagrangian(const CliCommand& cmd);
int run_sweep(const CliCommand& cmd);
int run_calibrate(const CliCommand& cmd);

/// Dispatches on cmd.subcommand and maps exceptions to exit codes.
int dispatch(const CliCommand& cmd);

}  // namespace peskin
