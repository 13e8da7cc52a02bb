// Command-line front end: peskin <simulate|check|oracle|lagrangian|sweep|calibrate>.
//
// Exit status: 0 pass, 2 usage or configuration error, 3 numerical failure.
// The default output root is taken from $PESKIN_OUT_ROOT ("runs" if unset).

#include <CLI11.hpp>

#include "peskin/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator and invariant checks for the tangential Peskin equation"};
  app.require_subcommand(1);

  peskin::CliCommand cmd;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cmd.config_path, "flat dotted-key config file")->check(CLI::ExistingFile);
    sub->add_option("--out", cmd.out_dir, "output directory (default $PESKIN_OUT_ROOT/<subcommand>-<config>)");
    sub->add_option("--set", cmd.overrides, "override key=value (repeatable)")->allow_extra_args(false);
    sub->add_flag("--force", cmd.force, "overwrite an existing completed run");
  };

  auto* simulate = app.add_subcommand("simulate", "run the spectral solver and write records");
  add_common(simulate);
  auto* check = app.add_subcommand("check", "run the invariant suite on a finished run directory");
  add_common(check);
  auto* oracle = app.add_subcommand("oracle", "cross-validate operators against independent quadratures");
  add_common(oracle);
  auto* lagrangian = app.add_subcommand("lagrangian", "simulate, advect the string and check the flow map");
  add_common(lagrangian);
  auto* sweep = app.add_subcommand("sweep", "run the cartesian product of sweep.<key> values");
  add_common(sweep);
  sweep->add_option("--workers", cmd.workers, "concurrent runs")->check(CLI::PositiveNumber);
  auto* calibrate = app.add_subcommand("calibrate", "estimate the empirical constants used by the checks");
  add_common(calibrate);
  calibrate->add_option("--workers", cmd.workers, "concurrent runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : peskin::kExitUsage;
  }
  cmd.subcommand = app.get_subcommands().front()->get_name();
  return peskin::dispatch(cmd);
}
