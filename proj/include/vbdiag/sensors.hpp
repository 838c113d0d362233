#pragma once

#include "vbdiag/gm_noise.hpp"

namespace vbdiag {

/// Combined tachometer/radar odometry: white velocity noise sampled at `rate`.
struct OdometerModel {
  double sigma_v = 0.05;  // m/s
  double rate = 1.0;      // Hz

  /// Standard deviation of one displacement increment [m].
  double delta_sigma() const noexcept { return sigma_v / rate; }

  bool operator==(const OdometerModel&) const = default;
};

/// Track-geometry reference: cross-track and vertical map coordinates carry a
/// GM1 error of stationary sigma `sigma_map` and correlation time `tau_map`.
struct TrackMapModel {
  double sigma_map = 1.0;  // m
  double tau_map = 300.0;  // s

  Gm1Params gm_params() const noexcept { return {sigma_map * sigma_map, tau_map}; }

  bool operator==(const TrackMapModel&) const = default;
};

void validate(const OdometerModel& model);
void validate(const TrackMapModel& model);

/// Odometer displacement over one epoch: true_delta + (sigma_v / rate) * draw.
inline double odometer_delta(const OdometerModel& model, double true_delta,
                             double gaussian_draw) noexcept {
  return true_delta + model.delta_sigma() * gaussian_draw;
}

/// Advances one map-error axis and returns its new value.
inline double map_coordinate_error(Gm1Process& axis, double gaussian_draw) noexcept {
  return axis.step(gaussian_draw);
}

/// Independent cross-track and vertical map errors.
struct TrackMapError {
  Gm1Process cross;
  Gm1Process vertical;

  TrackMapError() = default;
  TrackMapError(const TrackMapModel& model, double dt)
      : cross(model.gm_params(), dt), vertical(model.gm_params(), dt) {}
};

}  // namespace vbdiag
