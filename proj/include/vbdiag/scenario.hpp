#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vbdiag/faults.hpp"
#include "vbdiag/gm_noise.hpp"
#include "vbdiag/monitors.hpp"
#include "vbdiag/sensors.hpp"

namespace vbdiag {

/// Full description of one Monte Carlo experiment.
///
/// Text form: one `key = value` per line, dotted section keys, '#' comments.
/// Every key is optional; see README.md for the key list.
struct ScenarioConfig {
  /// Builtin skyplot name ("gps24", "dual54") or a path. Relative paths are
  /// resolved against `base_dir` (the scenario file's directory).
  std::string skyplot = "dual54";
  std::filesystem::path base_dir;
  double mask_deg = 5.0;

  std::vector<double> headings{0.0, 15.0, 30.0, 45.0, 60.0, 75.0};
  /// Heading 0 points the along-track axis at the faulty satellite's azimuth.
  bool heading_relative_to_fault = true;

  FaultProfile fault;
  double duration = 15000.0;  // s
  double dt = 1.0;            // s
  std::size_t reps = 10000;
  double failure_threshold = 20.0;  // m
  double p_fa = 1e-7;
  std::uint64_t master_seed = 1;
  double speed = 83.3;  // m/s

  ErrorModelConfig errors;
  OdometerModel odometer;
  TrackMapModel map;
  /// Cross-track and vertical banks from the track map; off = odometry only.
  bool use_map = true;

  std::vector<double> alphas{kBankAlphas.begin(), kBankAlphas.end()};
  double warmup_time_constants = 10.0;

  double balise_spacing = 2000.0;
  double jump_threshold = 20.0;

  double pmd_grid_min = -500.0;
  double pmd_grid_max = 500.0;
  double pmd_grid_step = 1.0;

  /// Skyplots pooled by the threshold regression; empty means `skyplot` only.
  std::vector<std::string> calibration_skyplots;

  bool operator==(const ScenarioConfig&) const = default;

  HazardCriteria hazard_criteria() const {
    return {balise_spacing, jump_threshold, failure_threshold};
  }
  std::size_t epoch_count() const;
  std::vector<double> pmd_grid() const;
  /// Skyplot reference with base_dir applied to relative paths.
  std::string resolved_skyplot(const std::string& name_or_path) const;
};

/// Throws ParameterError on an invariant violation.
void validate(const ScenarioConfig& config);

/// Throws ParseError (with line number) on unknown keys, malformed or
/// out-of-range values, and a missing skyplot file.
ScenarioConfig parse_scenario(std::istream& in, const std::string& source = "<scenario>",
                              const std::filesystem::path& base_dir = {});
ScenarioConfig parse_scenario_file(const std::filesystem::path& path);

/// Text that parse_scenario maps back to an equal config.
std::string serialize_scenario(const ScenarioConfig& config);

}  // namespace vbdiag
