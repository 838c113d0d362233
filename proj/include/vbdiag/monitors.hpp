#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "vbdiag/gm_noise.hpp"

namespace vbdiag {

enum class Direction { along = 0, cross = 1, vertical = 2 };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

/// Raw monitor (alpha = 1) followed by the three EWMA members.
inline constexpr std::array<double, 4> kBankAlphas{1.0, 0.1, 0.01, 0.001};

/// q = dx_gnss - dx_odo.
inline double raw_monitor_along(double dx_gnss, double dx_odo) noexcept { return dx_gnss - dx_odo; }

/// q = d_gnss - d_map for the cross-track or vertical direction.
double raw_monitor_lateral(double d_gnss, double d_map, Direction direction);

/// alpha * raw + (1 - alpha) * prev; alpha must lie in (0, 1].
double ewma_update(double prev, double raw, double alpha);

/// Epoch difference of a stationary GM1 process with the given variance and
/// one-step correlation phi.
struct DifferencedGmTerm {
  double variance = 0.0;
  double phi = 1.0;
};

/// Fault-free content of one raw monitor: a sum of independent differenced
/// GM1 terms plus white noise.
struct MonitorInputModel {
  std::vector<DifferencedGmTerm> gm_terms;
  double white_variance = 0.0;

  double raw_variance() const noexcept;
};

/// Steady-state variance of an EWMA of the monitor input, obtained by summing
/// the input autocovariance against the EWMA weights. For a differenced GM1
/// term the lag-h autocovariance is -R (1-phi)^2 phi^(h-1), which gives
///   var = 2 R alpha^2 (1 - phi) / ((2 - alpha)(1 - (1 - alpha) phi));
/// white noise contributes alpha / (2 - alpha) * sigma^2.
double ewma_variance(const MonitorInputModel& input, double alpha);
double monitor_sigma(const MonitorInputModel& input, double alpha);

/// GNSS part of a monitor: one coefficient per satellite (a track-frame row
/// of the solution matrix) against each satellite's GM1 budget. Terms with
/// equal phi are merged.
MonitorInputModel gnss_monitor_input(std::span<const double> coefficients,
                                     std::span<const std::array<Gm1Params, kErrorSourceCount>> budgets,
                                     double dt);

/// Stationary position-error sigma along a solution row.
double gnss_position_sigma(std::span<const double> coefficients,
                           std::span<const std::array<Gm1Params, kErrorSourceCount>> budgets);

/// Two-sided standard-normal quantile k_T with P(|N(0,1)| > k_T) = p_fa.
double threshold_factor(double p_fa);
/// T = k_T * sigma.
double threshold(double sigma, double p_fa);

/// Raw + EWMA monitors of one direction with their thresholds.
class MonitorBank {
 public:
  MonitorBank() = default;
  MonitorBank(Direction direction, std::span<const double> alphas, std::span<const double> sigmas,
              double p_fa);

  /// Feeds one raw monitor value into every member.
  void update(double raw) noexcept {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      values_[i] = alphas_[i] * raw + (1.0 - alphas_[i]) * values_[i];
    }
  }

  void reset() noexcept;

  Direction direction() const noexcept { return direction_; }
  std::size_t size() const noexcept { return alphas_.size(); }
  std::span<const double> alphas() const noexcept { return alphas_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> sigmas() const noexcept { return sigmas_; }
  std::span<const double> thresholds() const noexcept { return thresholds_; }

  /// Overrides a monitor state (tests, replay).
  void set_value(std::size_t i, double value) { values_.at(i) = value; }

 private:
  Direction direction_ = Direction::along;
  std::vector<double> alphas_;
  std::vector<double> values_;
  std::vector<double> sigmas_;
  std::vector<double> thresholds_;
};

struct DetectionOutcome {
  bool detected = false;
  double epoch = 0.0;
  Direction direction = Direction::along;
  double alpha = 1.0;
  double exceed_ratio = 0.0;  // |value| / threshold of the reported monitor
  /// Every exceeding monitor was still inside its EWMA spin-up window.
  bool warmup = false;
};

/// Spin-up window: detections by a member with weight alpha before
/// `time_constants / alpha` epochs are flagged as warm-up.
struct WarmupPolicy {
  double time_constants = 10.0;

  bool in_warmup(double epochs_since_start, double alpha) const noexcept {
    return epochs_since_start < time_constants / alpha;
  }
};

/// Detection when any monitor satisfies |value| > threshold. Reports the
/// exceeding monitor with the largest exceed ratio, preferring monitors past
/// their warm-up window. Without exceedance, reports the largest ratio seen.
DetectionOutcome detect(std::span<const MonitorBank> banks, double epoch = 0.0,
                        double epochs_since_start = 0.0, const WarmupPolicy& warmup = {});

struct CalibrationPair {
  double predictor = 0.0;  // GNSS position sigma along the monitor's axis [m]
  double response = 0.0;   // fault-free monitor sigma [m]
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;

  double predict(double x) const noexcept { return slope * x + intercept; }
};

/// Ordinary least-squares line through the calibration pairs. Throws
/// CalibrationError with fewer than 2 points or a constant predictor.
LinearFit fit_threshold_regression(std::span<const CalibrationPair> pairs);

}  // namespace vbdiag
