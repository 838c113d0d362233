#include "vbdiag/cli.hpp"

#include <fmt/format.h>

#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>

#include "vbdiag/errors.hpp"

namespace vbdiag {

ScenarioConfig load_command_scenario(const CliCommand& cmd) {
  ScenarioConfig config;
  if (!cmd.scenario_path.empty()) config = parse_scenario_file(cmd.scenario_path);
  if (cmd.seed) config.master_seed = *cmd.seed;
  if (cmd.reps) config.reps = *cmd.reps;
  validate(config);
  return config;
}

std::vector<CalibrationRow> calibrate(const ScenarioConfig& config) {
  std::vector<std::string> skyplots = config.calibration_skyplots;
  if (skyplots.empty()) skyplots.push_back(config.skyplot);

  struct Point {
    Direction direction;
    std::size_t alpha_index;
    double predictor;
    double sigma;
    double threshold;
  };
  std::vector<Point> points;
  for (const auto& name : skyplots) {
    ScenarioConfig c = config;
    c.skyplot = name;
    const Experiment experiment(c);
    for (std::size_t h = 0; h < experiment.heading_count(); ++h) {
      const auto& setup = experiment.heading(h);
      for (int d = 0; d < 3; ++d) {
        for (std::size_t a = 0; a < c.alphas.size(); ++a) {
          points.push_back({static_cast<Direction>(d), a, setup.position_sigmas[static_cast<std::size_t>(d)], setup.sigmas[d][a],
                            setup.thresholds[d][a]});
        }
      }
    }
  }

  std::vector<CalibrationRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) {
    std::vector<CalibrationPair> pairs;
    for (const auto& q : points) {
      if (q.direction == p.direction && q.alpha_index == p.alpha_index) pairs.push_back({q.predictor, q.sigma});
    }
    rows.push_back({p.direction, config.alphas[p.alpha_index], p.sigma, p.threshold,
                    fit_threshold_regression(pairs)});
  }
  return rows;
}

namespace {

int do_validate(const CliCommand& cmd, std::ostream& out) {
  const auto config = load_command_scenario(cmd);
  const Experiment experiment(config);
  out << fmt::format("ok: {} satellites ({}), faulty {}, {} headings\n", experiment.skyplot().size(),
                     experiment.skyplot().constellation_label(), experiment.skyplot().faulty_id.to_string(),
                     experiment.heading_count());
  return 0;
}

int do_run(const CliCommand& cmd, std::ostream& out) {
  const auto config = load_command_scenario(cmd);
  const Experiment experiment(config);
  const auto records = run_monte_carlo(experiment, cmd.workers);

  std::ostringstream records_csv, pmd_csv, summary_csv;
  write_records_csv(records_csv, records);
  write_pmd_csv(pmd_csv, records, config.pmd_grid());
  write_summary_csv(summary_csv, records, config.fault, experiment.skyplot().constellation_label());

  std::filesystem::create_directories(cmd.out_dir);
  write_file_atomically(cmd.out_dir / "records.csv", records_csv.str());
  write_file_atomically(cmd.out_dir / "pmd.csv", pmd_csv.str());
  write_file_atomically(cmd.out_dir / "summary.csv", summary_csv.str());
  out << fmt::format("{} runs written to {}\n", records.size(), cmd.out_dir.string());
  return 0;
}

int do_calibrate(const CliCommand& cmd, std::ostream& out) {
  const auto config = load_command_scenario(cmd);
  const auto rows = calibrate(config);
  std::ostringstream csv;
  write_calibration_csv(csv, rows);
  std::filesystem::create_directories(cmd.out_dir);
  write_file_atomically(cmd.out_dir / "calibration.csv", csv.str());
  out << fmt::format("{} calibration rows written to {}\n", rows.size(), cmd.out_dir.string());
  return 0;
}

int do_hazard_classify(const CliCommand& cmd, std::ostream& out) {
  if (cmd.trace_path.empty()) throw InputError("hazard-classify needs --trace <csv>");
  ScenarioConfig config;
  if (!cmd.scenario_path.empty()) config = parse_scenario_file(cmd.scenario_path);
  std::ifstream in(cmd.trace_path);
  if (!in) throw InputError("cannot open " + cmd.trace_path.string());
  const auto trace = read_trace_csv(in, cmd.trace_path.string());
  out << to_string(classify_hazard(trace, config.hazard_criteria())) << '\n';
  return 0;
}

}  // namespace

int run_command(const CliCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    switch (cmd.subcommand) {
      case Subcommand::validate: return do_validate(cmd, out);
      case Subcommand::run: return do_run(cmd, out);
      case Subcommand::calibrate: return do_calibrate(cmd, out);
      case Subcommand::hazard_classify: return do_hazard_classify(cmd, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace vbdiag
