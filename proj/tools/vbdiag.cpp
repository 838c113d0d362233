// vbdiag: virtual-balise GNSS fault diagnostic simulator.
#include <CLI11.hpp>
#include <iostream>

#include "vbdiag/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"GNSS virtual-balise fault diagnostics: Monte Carlo missed-detection study"};
  app.require_subcommand(1);

  vbdiag::CliCommand cmd;
  std::uint64_t seed = 0;
  std::size_t reps = 0;

  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--scenario", cmd.scenario_path, "Scenario file (key = value); defaults if omitted")
        ->check(CLI::ExistingFile);
    if (needs_out) sub->add_option("--out", cmd.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Master seed (overrides the scenario)");
    sub->add_option("--reps", reps, "Repetitions per heading (overrides the scenario)");
    sub->add_option("--workers", cmd.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run the Monte Carlo campaign and write records/pmd/summary CSVs");
  add_common(run, true);
  auto* calibrate = app.add_subcommand("calibrate", "Fit the threshold-vs-geometry regression");
  add_common(calibrate, true);
  auto* validate = app.add_subcommand("validate", "Check scenario and skyplot without simulating");
  add_common(validate, false);
  auto* hazard = app.add_subcommand("hazard-classify", "Classify a t,along_error_m trace");
  hazard->add_option("--trace", cmd.trace_path, "Trace CSV")->required()->check(CLI::ExistingFile);
  hazard->add_option("--scenario", cmd.scenario_path, "Scenario supplying hazard thresholds")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) cmd.subcommand = vbdiag::Subcommand::run;
  if (calibrate->parsed()) cmd.subcommand = vbdiag::Subcommand::calibrate;
  if (validate->parsed()) cmd.subcommand = vbdiag::Subcommand::validate;
  if (hazard->parsed()) cmd.subcommand = vbdiag::Subcommand::hazard_classify;
  for (auto* sub : {run, calibrate, validate}) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) cmd.seed = seed;
    if (sub->count("--reps")) cmd.reps = reps;
  }
  return vbdiag::run_command(cmd, std::cout, std::cerr);
}
