#include "vbdiag/gm_noise.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vbdiag/errors.hpp"

namespace vbdiag {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_elevation(double elevation_deg) {
  if (!(elevation_deg > 0.0) || elevation_deg > 90.0) {
    throw DomainError("elevation must lie in (0, 90] deg, got " + std::to_string(elevation_deg));
  }
}

}  // namespace

Gm1Coeffs gm1_discrete_coeffs(const Gm1Params& params, double dt) {
  if (!(params.tau > 0.0)) {
    throw ParameterError("GM1 correlation time must be positive");
  }
  if (params.variance_r0 < 0.0) {
    throw ParameterError("GM1 variance must be non-negative");
  }
  if (dt < 0.0) {
    throw ParameterError("GM1 step must be non-negative");
  }
  const double phi = std::exp(-dt / params.tau);
  return {phi, params.variance_r0 * (1.0 - phi * phi)};
}

Gm1Process::Gm1Process(const Gm1Params& params, double dt, double initial_state)
    : params_(params),
      coeffs_(gm1_discrete_coeffs(params, dt)),
      noise_gain_(std::sqrt(coeffs_.process_noise_var)),
      dt_(dt),
      state_(initial_state) {}

Gm1Process Gm1Process::stationary(const Gm1Params& params, double dt, double unit_draw) {
  return Gm1Process(params, dt, std::sqrt(params.variance_r0) * unit_draw);
}

double tropo_sigma(double elevation_deg, double zenith_sigma) {
  check_elevation(elevation_deg);
  const double s = std::sin(elevation_deg * kDegToRad);
  return zenith_sigma * 1.001 / std::sqrt(0.002001 + s * s);
}

double iono_obliquity(double elevation_deg, double earth_radius, double shell_height) {
  check_elevation(elevation_deg);
  const double r = earth_radius * std::cos(elevation_deg * kDegToRad) / (earth_radius + shell_height);
  return 1.0 / std::sqrt(1.0 - r * r);
}

double iono_sigma(double elevation_deg, double vertical_sigma, double earth_radius,
                  double shell_height) {
  return vertical_sigma * iono_obliquity(elevation_deg, earth_radius, shell_height);
}

std::array<Gm1Params, kErrorSourceCount> budget_params(const ErrorModelConfig& config,
                                                       double elevation_deg) {
  const double iono = iono_sigma(elevation_deg, config.iono_vertical_sigma, config.earth_radius,
                                 config.iono_shell_height);
  const double tropo = tropo_sigma(elevation_deg, config.tropo_zenith_sigma);
  return {{
      {iono * iono, config.iono_tau},
      {tropo * tropo, config.tropo_tau},
      {config.orbit_clock_variance, config.orbit_clock_tau},
      {config.user_variance, config.user_tau},
  }};
}

RangeErrorBudget::RangeErrorBudget(const std::array<Gm1Params, kErrorSourceCount>& params,
                                   double dt) {
  for (std::size_t i = 0; i < kErrorSourceCount; ++i) {
    components[i] = Gm1Process(params[i], dt);
  }
}

double RangeErrorBudget::total() const noexcept {
  double sum = 0.0;
  for (const auto& c : components) sum += c.state();
  return sum;
}

double RangeErrorBudget::stationary_variance() const noexcept {
  double sum = 0.0;
  for (const auto& c : components) sum += c.params().variance_r0;
  return sum;
}

double RangeErrorBudget::step(std::span<const double, kErrorSourceCount> draws) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < kErrorSourceCount; ++i) sum += components[i].step(draws[i]);
  return sum;
}

void RangeErrorBudget::initialize(std::span<const double, kErrorSourceCount> unit_draws) noexcept {
  for (std::size_t i = 0; i < kErrorSourceCount; ++i) {
    components[i].set_state(std::sqrt(components[i].params().variance_r0) * unit_draws[i]);
  }
}

void sample_range_errors(std::span<RangeErrorBudget> budgets, std::span<const double> draws,
                         std::span<double> out) {
  if (draws.size() != budgets.size() * kErrorSourceCount || out.size() != budgets.size()) {
    throw std::invalid_argument("sample_range_errors: draw/output sizes do not match budgets");
  }
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    out[i] = budgets[i].step(draws.subspan(i * kErrorSourceCount).first<kErrorSourceCount>());
  }
}

}  // namespace vbdiag
