#include "vbdiag/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "vbdiag/errors.hpp"

namespace vbdiag {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::span<const double> row_span(const Eigen::Matrix<double, 3, Eigen::Dynamic>& rows, int r,
                                 std::vector<double>& scratch) {
  scratch.assign(static_cast<std::size_t>(rows.cols()), 0.0);
  for (Eigen::Index i = 0; i < rows.cols(); ++i) scratch[static_cast<std::size_t>(i)] = rows(r, i);
  return scratch;
}

}  // namespace

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t heading_index, std::size_t run_index) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ (0xd1b54a32d192ed03ULL * (static_cast<std::uint64_t>(heading_index) + 1)));
  s = splitmix64(s ^ (0x8cb92ba72f3d8dd7ULL * (static_cast<std::uint64_t>(run_index) + 1)));
  return s;
}

std::array<MonitorBank, 3> HeadingSetup::make_banks(std::span<const double> alphas,
                                                    double p_fa) const {
  return {MonitorBank(Direction::along, alphas, sigmas[0], p_fa),
          MonitorBank(Direction::cross, alphas, sigmas[1], p_fa),
          MonitorBank(Direction::vertical, alphas, sigmas[2], p_fa)};
}

Experiment::Experiment(ScenarioConfig config) : config_(std::move(config)) {
  validate(config_);
  validate(config_.odometer);
  validate(config_.map);
  skyplot_ = resolve_skyplot(config_.resolved_skyplot(config_.skyplot), config_.fault.satellite,
                             config_.mask_deg);
  validate_skyplot(skyplot_, config_.mask_deg);
  faulty_index_ = skyplot_.index_of(skyplot_.faulty_id);

  budgets_.reserve(skyplot_.size());
  weights_.resize(static_cast<Eigen::Index>(skyplot_.size()));
  for (std::size_t i = 0; i < skyplot_.size(); ++i) {
    budgets_.push_back(budget_params(config_.errors, skyplot_.satellites[i].elevation_deg));
    double variance = 0.0;
    for (const auto& p : budgets_.back()) variance += p.variance_r0;
    weights_[static_cast<Eigen::Index>(i)] = 1.0 / variance;
  }
  solution_ = solution_matrix(geometry_matrix(skyplot_), weights_);

  headings_.reserve(config_.headings.size());
  for (double h : config_.headings) headings_.push_back(make_heading(h));
}

HeadingSetup Experiment::make_heading(double heading_deg) const {
  HeadingSetup setup;
  setup.heading_deg = heading_deg;
  double azimuth = heading_deg;
  if (config_.heading_relative_to_fault) azimuth += skyplot_.satellites[faulty_index_].azimuth_deg;
  setup.track_azimuth_deg = std::fmod(azimuth, 360.0);
  setup.rows = track_solution(solution_, TrackFrame{setup.track_azimuth_deg});

  std::vector<double> scratch;
  for (int d = 0; d < 3; ++d) {
    const auto row = row_span(setup.rows, d, scratch);
    setup.inputs[d] = gnss_monitor_input(row, budgets_, config_.dt);
    setup.position_sigmas[d] = gnss_position_sigma(row, budgets_);
  }
  const double odo = config_.odometer.delta_sigma();
  setup.inputs[0].white_variance += odo * odo;
  const auto map_phi = gm1_discrete_coeffs(config_.map.gm_params(), config_.dt).phi;
  const double map_var = config_.map.sigma_map * config_.map.sigma_map;
  setup.inputs[1].gm_terms.push_back({map_var, map_phi});
  setup.inputs[2].gm_terms.push_back({map_var, map_phi});

  const double k = threshold_factor(config_.p_fa);
  for (int d = 0; d < 3; ++d) {
    for (double a : config_.alphas) {
      const double s = monitor_sigma(setup.inputs[d], a);
      setup.sigmas[d].push_back(s);
      setup.thresholds[d].push_back(k * s);
    }
  }
  return setup;
}

std::optional<double> RunRecord::t_d() const {
  if (!t_detect) return std::nullopt;
  return *t_detect - t_fault;
}

std::optional<double> RunRecord::t_dsf() const {
  if (!t_detect || !t_failure) return std::nullopt;
  return *t_detect - *t_failure;
}

EpochSimulator::EpochSimulator(const Experiment& experiment, const HeadingSetup& heading,
                               std::uint64_t seed, const FaultProfile& fault)
    : experiment_(experiment), heading_(heading), fault_(fault), normal_(seed) {
  const auto& cfg = experiment.config();
  const auto n = experiment.skyplot().size();
  budgets_.reserve(n);
  for (const auto& params : experiment.budgets()) budgets_.emplace_back(params, cfg.dt);
  map_ = TrackMapError(cfg.map, cfg.dt);
  draws_.resize(n * kErrorSourceCount + 3);
  range_errors_.resize(static_cast<Eigen::Index>(n));

  // Stationary start: every GM state drawn from N(0, R0).
  normal_.fill(draws_);
  for (std::size_t i = 0; i < n; ++i) {
    budgets_[i].initialize(std::span<const double>(draws_).subspan(i * kErrorSourceCount).first<kErrorSourceCount>());
    range_errors_[static_cast<Eigen::Index>(i)] = budgets_[i].total();
  }
  map_.cross.set_state(cfg.map.sigma_map * draws_[n * kErrorSourceCount + 1]);
  map_.vertical.set_state(cfg.map.sigma_map * draws_[n * kErrorSourceCount + 2]);
  map_cross_ = map_.cross.state();
  map_vertical_ = map_.vertical.state();

  range_errors_[static_cast<Eigen::Index>(experiment.faulty_index())] += fault_bias(fault_, 0.0);
  current_.position_error = heading_.rows * range_errors_;
}

const EpochSimulator::Epoch& EpochSimulator::step() {
  const auto& cfg = experiment_.config();
  const std::size_t n = budgets_.size();
  ++current_.index;
  current_.t = static_cast<double>(current_.index) * cfg.dt;

  normal_.fill(draws_);
  sample_range_errors(budgets_, std::span<const double>(draws_).first(n * kErrorSourceCount),
                      std::span<double>(range_errors_.data(), n));
  range_errors_[static_cast<Eigen::Index>(experiment_.faulty_index())] += fault_bias(fault_, current_.t);

  const Eigen::Vector3d previous = current_.position_error;
  current_.position_error = heading_.rows * range_errors_;

  const double true_delta = cfg.speed * cfg.dt;
  const double dx_gnss = true_delta + (current_.position_error[0] - previous[0]);
  const double dx_odo = odometer_delta(cfg.odometer, true_delta, draws_[n * kErrorSourceCount]);

  // Straight, level track: the map reference moves only by its own error.
  const double map_cross = map_coordinate_error(map_.cross, draws_[n * kErrorSourceCount + 1]);
  const double map_vertical = map_coordinate_error(map_.vertical, draws_[n * kErrorSourceCount + 2]);

  current_.raw[0] = raw_monitor_along(dx_gnss, dx_odo);
  current_.raw[1] = raw_monitor_lateral(current_.position_error[1] - previous[1],
                                        map_cross - map_cross_, Direction::cross);
  current_.raw[2] = raw_monitor_lateral(current_.position_error[2] - previous[2],
                                        map_vertical - map_vertical_, Direction::vertical);
  map_cross_ = map_cross;
  map_vertical_ = map_vertical;
  return current_;
}

RunRecord simulate_run(const Experiment& experiment, std::size_t heading_index, std::uint64_t seed,
                       std::size_t run_index) {
  const auto& cfg = experiment.config();
  const auto& heading = experiment.heading(heading_index);
  EpochSimulator sim(experiment, heading, seed, cfg.fault);
  auto banks = heading.make_banks(cfg.alphas, cfg.p_fa);
  const std::size_t active = cfg.use_map ? 3 : 1;
  const WarmupPolicy warmup{cfg.warmup_time_constants};

  RunRecord record;
  record.run_index = run_index;
  record.heading_deg = heading.heading_deg;
  record.t_fault = cfg.fault.start;

  HazardTracker tracker(cfg.hazard_criteria());
  tracker.observe(sim.current().position_error[0]);

  const std::size_t epochs = cfg.epoch_count();
  for (std::size_t k = 1; k <= epochs; ++k) {
    const auto& epoch = sim.step();
    for (std::size_t d = 0; d < active; ++d) banks[d].update(epoch.raw[d]);
    tracker.observe(epoch.position_error[0]);

    const bool after_fault = epoch.t >= record.t_fault;
    if (!record.t_failure && after_fault &&
        std::abs(epoch.position_error[0]) > cfg.failure_threshold) {
      record.t_failure = epoch.t;
    }
    const auto outcome = detect(std::span<const MonitorBank>(banks.data(), active), epoch.t,
                                static_cast<double>(k), warmup);
    if (outcome.detected) {
      if (!after_fault) {
        ++record.false_alarms;
      } else if (!record.t_detect) {
        record.t_detect = epoch.t;
        record.direction = outcome.direction;
        record.alpha = outcome.alpha;
        record.warmup_flag = outcome.warmup;
      }
    }
    // Nothing recorded changes once both times are known.
    if (record.t_detect && record.t_failure) break;
  }
  record.hazard = tracker.result();
  return record;
}

RunRecord run_once(const ScenarioConfig& config, double heading_deg, std::uint64_t seed) {
  ScenarioConfig single = config;
  single.headings = {heading_deg};
  const Experiment experiment(std::move(single));
  return simulate_run(experiment, 0, seed, 0);
}

std::vector<RunRecord> run_monte_carlo(const Experiment& experiment, std::size_t workers) {
  const auto& cfg = experiment.config();
  const std::size_t reps = cfg.reps;
  const std::size_t total = reps * experiment.heading_count();
  std::vector<RunRecord> records(total);

  auto run_index = [&](std::size_t j) {
    const std::size_t h = j / reps;
    const std::size_t r = j % reps;
    records[j] = simulate_run(experiment, h, run_seed(cfg.master_seed, h, r), r);
  };

  workers = std::max<std::size_t>(1, std::min(workers, total));
  if (workers == 1) {
    for (std::size_t j = 0; j < total; ++j) run_index(j);
    return records;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t j = next++; j < total; j = next++) run_index(j);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<RunRecord> run_monte_carlo(const ScenarioConfig& config, std::size_t workers) {
  const Experiment experiment(config);
  return run_monte_carlo(experiment, workers);
}

std::array<std::vector<double>, 3> monte_carlo_sigmas(const Experiment& experiment,
                                                      const HeadingSetup& heading,
                                                      std::size_t epochs, std::size_t skip_epochs,
                                                      std::uint64_t seed) {
  const auto& alphas = experiment.config().alphas;
  FaultProfile no_fault = experiment.config().fault;
  no_fault.rate = 0.0;
  no_fault.magnitude = 0.0;
  EpochSimulator sim(experiment, heading, seed, no_fault);

  const std::size_t m = alphas.size();
  std::array<std::vector<double>, 3> value, mean, m2;
  for (int d = 0; d < 3; ++d) {
    value[d].assign(m, 0.0);
    mean[d].assign(m, 0.0);
    m2[d].assign(m, 0.0);
  }
  std::size_t count = 0;
  for (std::size_t k = 1; k <= epochs; ++k) {
    const auto& epoch = sim.step();
    const bool sample = k > skip_epochs;
    if (sample) ++count;
    for (int d = 0; d < 3; ++d) {
      for (std::size_t i = 0; i < m; ++i) {
        value[d][i] = alphas[i] * epoch.raw[d] + (1.0 - alphas[i]) * value[d][i];
        if (!sample) continue;
        const double delta = value[d][i] - mean[d][i];
        mean[d][i] += delta / static_cast<double>(count);
        m2[d][i] += delta * (value[d][i] - mean[d][i]);
      }
    }
  }
  if (count < 2) throw InputError("monte_carlo_sigmas needs at least 2 sampled epochs");
  std::array<std::vector<double>, 3> sigma;
  for (int d = 0; d < 3; ++d) {
    for (std::size_t i = 0; i < m; ++i) {
      sigma[d].push_back(std::sqrt(m2[d][i] / static_cast<double>(count - 1)));
    }
  }
  return sigma;
}

std::optional<PmdCurve> pmd_curve(std::span<const RunRecord> records, std::span<const double> grid) {
  std::vector<std::optional<double>> tdsf;
  for (const auto& r : records) {
    if (r.t_failure) tdsf.push_back(r.t_dsf());
  }
  if (tdsf.empty()) return std::nullopt;
  PmdCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.pmd.reserve(grid.size());
  const double n = static_cast<double>(tdsf.size());
  for (double g : grid) {
    const auto missed = std::count_if(tdsf.begin(), tdsf.end(),
                                      [g](const std::optional<double>& v) { return !v || *v > g; });
    curve.pmd.push_back(static_cast<double>(missed) / n);
  }
  return curve;
}

std::vector<ExpectedTimes> expected_times(std::span<const RunRecord> records,
                                          std::optional<double> horizon) {
  std::vector<ExpectedTimes> out;
  std::vector<std::array<double, 2>> sums;
  std::vector<std::array<std::size_t, 2>> counts;
  for (const auto& r : records) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ExpectedTimes& e) { return e.heading_deg == r.heading_deg; });
    if (it == out.end()) {
      out.push_back({r.heading_deg, std::nullopt, std::nullopt, 0, 0, std::nullopt});
      sums.push_back({0.0, 0.0});
      counts.push_back({0, 0});
      it = out.end() - 1;
    }
    const auto i = static_cast<std::size_t>(it - out.begin());
    ++it->runs;
    if (auto td = r.t_d()) {
      sums[i][0] += *td;
      ++counts[i][0];
    } else {
      ++it->censored;
    }
    if (auto tdsf = r.t_dsf()) {
      sums[i][1] += *tdsf;
      ++counts[i][1];
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (counts[i][0]) out[i].e_td = sums[i][0] / static_cast<double>(counts[i][0]);
    if (counts[i][1]) out[i].e_tdsf = sums[i][1] / static_cast<double>(counts[i][1]);
    if (horizon && out[i].runs) {
      out[i].e_td_restricted = (sums[i][0] + *horizon * static_cast<double>(out[i].censored)) /
                               static_cast<double>(out[i].runs);
    }
  }
  return out;
}

}  // namespace vbdiag
