#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "vbdiag/report.hpp"
#include "vbdiag/scenario.hpp"

namespace vbdiag {

enum class Subcommand { run, calibrate, hazard_classify, validate };

struct CliCommand {
  Subcommand subcommand = Subcommand::run;
  std::filesystem::path scenario_path;  // empty: all defaults
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::size_t workers = 1;
  std::filesystem::path trace_path;  // hazard-classify input
};

/// Scenario from the command (file or defaults) with --seed/--reps applied.
ScenarioConfig load_command_scenario(const CliCommand& cmd);

/// Threshold regression over the configured calibration skyplots x headings.
/// One row per (skyplot, heading, direction, alpha) in that nesting order;
/// each row carries the fit of its (direction, alpha) group.
std::vector<CalibrationRow> calibrate(const ScenarioConfig& config);

/// Executes a subcommand. Returns the process exit status; diagnostics go to `err`.
int run_command(const CliCommand& cmd, std::ostream& out, std::ostream& err);

}  // namespace vbdiag
