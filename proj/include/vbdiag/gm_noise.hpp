#pragma once

#include <array>
#include <span>

namespace vbdiag {

/// First-order Gauss-Markov parameters: stationary variance R(0) [m^2] and
/// correlation time tau [s].
struct Gm1Params {
  double variance_r0 = 0.0;
  double tau = 1.0;

  bool operator==(const Gm1Params&) const = default;
};

/// Exact discretization of a GM1 process over a step dt:
///   x[k+1] = phi * x[k] + sqrt(process_noise_var) * w[k],  w ~ N(0, 1)
/// with phi = exp(-dt/tau) and process_noise_var = R(0) (1 - phi^2), so the
/// stationary variance is R(0) and the lag-n autocorrelation is phi^n.
struct Gm1Coeffs {
  double phi = 1.0;
  double process_noise_var = 0.0;
};

Gm1Coeffs gm1_discrete_coeffs(const Gm1Params& params, double dt);

class Gm1Process {
 public:
  Gm1Process() = default;
  Gm1Process(const Gm1Params& params, double dt = 1.0, double initial_state = 0.0);

  /// Process started from its stationary distribution: state = sqrt(R0) * unit_draw.
  static Gm1Process stationary(const Gm1Params& params, double dt, double unit_draw);

  /// Advances one step and returns the new state.
  double step(double gaussian_draw) noexcept {
    state_ = coeffs_.phi * state_ + noise_gain_ * gaussian_draw;
    return state_;
  }

  double state() const noexcept { return state_; }
  void set_state(double value) noexcept { state_ = value; }
  const Gm1Params& params() const noexcept { return params_; }
  const Gm1Coeffs& coeffs() const noexcept { return coeffs_; }
  double dt() const noexcept { return dt_; }

 private:
  Gm1Params params_{};
  Gm1Coeffs coeffs_{};
  double noise_gain_ = 0.0;
  double dt_ = 1.0;
  double state_ = 0.0;
};

inline double gm1_step(Gm1Process& process, double gaussian_draw) noexcept {
  return process.step(gaussian_draw);
}

/// Nominal residual-error model after SBAS correction. Ionosphere and
/// troposphere variances depend on elevation, the other two are constant.
struct ErrorModelConfig {
  double iono_vertical_sigma = 0.4;    // m
  double iono_tau = 360.0;             // s
  double iono_shell_height = 350.0e3;  // m
  double earth_radius = 6378.0e3;      // m
  double tropo_zenith_sigma = 0.12;    // m
  double tropo_tau = 1800.0;
  double orbit_clock_variance = 0.3;   // m^2
  double orbit_clock_tau = 3600.0;
  double user_variance = 1.5;          // m^2 (multipath + noise)
  double user_tau = 100.0;

  bool operator==(const ErrorModelConfig&) const = default;
};

/// Troposphere residual sigma [m]: zenith_sigma * 1.001 / sqrt(0.002001 + sin^2 el).
double tropo_sigma(double elevation_deg, double zenith_sigma = 0.12);

/// Thin-shell ionospheric obliquity factor (1 - (Re cos el / (Re + h))^2)^(-1/2).
double iono_obliquity(double elevation_deg, double earth_radius = 6378.0e3,
                      double shell_height = 350.0e3);

/// Slant ionosphere residual sigma [m] = vertical_sigma * obliquity.
double iono_sigma(double elevation_deg, double vertical_sigma = 0.4,
                  double earth_radius = 6378.0e3, double shell_height = 350.0e3);

enum class ErrorSource { iono = 0, tropo = 1, orbit_clock = 2, user = 3 };
inline constexpr std::size_t kErrorSourceCount = 4;

/// GM1 parameters of the four error sources for a satellite at `elevation_deg`,
/// indexed by ErrorSource.
std::array<Gm1Params, kErrorSourceCount> budget_params(const ErrorModelConfig& config,
                                                       double elevation_deg);

/// Four independent GM1 components of one satellite's range error.
struct RangeErrorBudget {
  std::array<Gm1Process, kErrorSourceCount> components;

  RangeErrorBudget() = default;
  RangeErrorBudget(const std::array<Gm1Params, kErrorSourceCount>& params, double dt);

  /// Sum of the current component states.
  double total() const noexcept;

  /// Sum of the stationary variances R(0).
  double stationary_variance() const noexcept;

  /// Steps every component with the given draws (one per component) and
  /// returns the new total.
  double step(std::span<const double, kErrorSourceCount> draws) noexcept;

  /// Draws every component state from N(0, R0).
  void initialize(std::span<const double, kErrorSourceCount> unit_draws) noexcept;
};

/// Steps every budget; draws are laid out 4 per satellite in ErrorSource order.
/// Writes the per-satellite total range error into `out`.
void sample_range_errors(std::span<RangeErrorBudget> budgets, std::span<const double> draws,
                         std::span<double> out);

}  // namespace vbdiag
