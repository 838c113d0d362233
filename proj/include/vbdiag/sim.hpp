#pragma once

#include <Eigen/Dense>
#include <array>
#include <boost/random/normal_distribution.hpp>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "vbdiag/constellation.hpp"
#include "vbdiag/faults.hpp"
#include "vbdiag/gm_noise.hpp"
#include "vbdiag/monitors.hpp"
#include "vbdiag/scenario.hpp"
#include "vbdiag/sensors.hpp"

namespace vbdiag {

/// Standard normal draws from a seeded 64-bit Mersenne twister. Both the
/// engine and the ziggurat transform are fully specified, so streams are
/// reproducible across platforms.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  double operator()() { return dist_(engine_); }
  void fill(std::span<double> out) {
    for (auto& v : out) v = dist_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> dist_;
};

/// Per-run seed derived from (master seed, heading index, run index) only.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t heading_index, std::size_t run_index);

/// Geometry, monitor models and thresholds for one train heading.
struct HeadingSetup {
  double heading_deg = 0.0;        // as configured
  double track_azimuth_deg = 0.0;  // along-track axis azimuth actually used
  Eigen::Matrix<double, 3, Eigen::Dynamic> rows;  // along, cross, vertical solution rows
  std::array<MonitorInputModel, 3> inputs;
  std::array<std::vector<double>, 3> sigmas;      // per alpha
  std::array<std::vector<double>, 3> thresholds;  // per alpha
  std::array<double, 3> position_sigmas{};        // stationary GNSS position sigma per axis

  /// Fresh monitor banks with this heading's thresholds.
  std::array<MonitorBank, 3> make_banks(std::span<const double> alphas, double p_fa) const;
};

/// Prepared, immutable experiment: skyplot, least-squares solution and
/// per-heading monitor setups. Safe to share between worker threads.
class Experiment {
 public:
  explicit Experiment(ScenarioConfig config);

  const ScenarioConfig& config() const noexcept { return config_; }
  const Skyplot& skyplot() const noexcept { return skyplot_; }
  const SolutionMatrix& solution() const noexcept { return solution_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }
  std::span<const std::array<Gm1Params, kErrorSourceCount>> budgets() const noexcept { return budgets_; }
  std::size_t faulty_index() const noexcept { return faulty_index_; }

  std::size_t heading_count() const noexcept { return headings_.size(); }
  const HeadingSetup& heading(std::size_t i) const { return headings_.at(i); }

  /// Setup for an arbitrary heading (not necessarily in the config list).
  HeadingSetup make_heading(double heading_deg) const;

 private:
  ScenarioConfig config_;
  Skyplot skyplot_;
  std::vector<std::array<Gm1Params, kErrorSourceCount>> budgets_;
  Eigen::VectorXd weights_;
  SolutionMatrix solution_;
  std::size_t faulty_index_ = 0;
  std::vector<HeadingSetup> headings_;
};

/// Outcome of one simulated run.
struct RunRecord {
  std::size_t run_index = 0;
  double heading_deg = 0.0;
  double t_fault = 0.0;
  std::optional<double> t_failure;  // first |along error| > failure threshold
  std::optional<double> t_detect;   // first detection at or after t_fault
  std::optional<Direction> direction;
  std::optional<double> alpha;
  bool warmup_flag = false;   // t_detect came from monitors still in EWMA spin-up
  HazardClass hazard = HazardClass::none;
  std::size_t false_alarms = 0;  // detection epochs before fault onset

  std::optional<double> t_d() const;
  std::optional<double> t_dsf() const;

  bool operator==(const RunRecord&) const = default;
};

/// Epoch-by-epoch simulator of one run: GM error sources, sensors, the
/// injected fault and the three raw monitors.
class EpochSimulator {
 public:
  struct Epoch {
    std::size_t index = 0;
    double t = 0.0;
    Eigen::Vector3d position_error = Eigen::Vector3d::Zero();  // along, cross, vertical
    std::array<double, 3> raw{};  // along, cross, vertical raw monitors
  };

  EpochSimulator(const Experiment& experiment, const HeadingSetup& heading, std::uint64_t seed,
                 const FaultProfile& fault);

  /// State at epoch 0 (no monitor output yet).
  const Epoch& current() const noexcept { return current_; }
  /// Advances one epoch.
  const Epoch& step();

 private:
  const Experiment& experiment_;
  const HeadingSetup& heading_;
  FaultProfile fault_;
  NormalSource normal_;
  std::vector<RangeErrorBudget> budgets_;
  TrackMapError map_;
  std::vector<double> draws_;
  Eigen::VectorXd range_errors_;
  Epoch current_;
  double map_cross_ = 0.0;
  double map_vertical_ = 0.0;
};

/// One run at a configured heading with an explicit seed.
RunRecord simulate_run(const Experiment& experiment, std::size_t heading_index, std::uint64_t seed,
                       std::size_t run_index = 0);

/// One run at `heading_deg` with an explicit seed.
RunRecord run_once(const ScenarioConfig& config, double heading_deg, std::uint64_t seed);

/// reps x headings runs, heading-major. Output order and content do not
/// depend on `workers`.
std::vector<RunRecord> run_monte_carlo(const Experiment& experiment, std::size_t workers = 1);
std::vector<RunRecord> run_monte_carlo(const ScenarioConfig& config, std::size_t workers = 1);

/// Sample standard deviation of every monitor (direction x alpha) over a
/// fault-free run, ignoring the first `skip_epochs`.
std::array<std::vector<double>, 3> monte_carlo_sigmas(const Experiment& experiment,
                                                      const HeadingSetup& heading,
                                                      std::size_t epochs, std::size_t skip_epochs,
                                                      std::uint64_t seed);

struct PmdCurve {
  std::vector<double> grid;
  std::vector<double> pmd;
};

/// pmd(g) = fraction of failed runs whose T_dsf is undefined or > g. Only
/// runs with a positioning failure enter. std::nullopt when none failed.
std::optional<PmdCurve> pmd_curve(std::span<const RunRecord> records, std::span<const double> grid);

struct ExpectedTimes {
  double heading_deg = 0.0;
  std::optional<double> e_td;    // mean over detected runs
  std::optional<double> e_tdsf;  // mean over runs with failure and detection
  std::size_t runs = 0;
  std::size_t censored = 0;      // runs without detection
  // Restricted mean of T_d: censored runs count as the observation horizon.
  // A lower bound on the true mean; only set when a horizon is given.
  std::optional<double> e_td_restricted;
};

/// Per heading, in first-appearance order. `horizon` is the time from fault
/// onset to the end of the run (duration - fault.start).
std::vector<ExpectedTimes> expected_times(std::span<const RunRecord> records,
                                          std::optional<double> horizon = std::nullopt);

}  // namespace vbdiag
