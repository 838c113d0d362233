#include "vbdiag/monitors.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <string>

#include "vbdiag/errors.hpp"

namespace vbdiag {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::along: return "along";
    case Direction::cross: return "cross";
    case Direction::vertical: return "vertical";
  }
  return "?";
}

Direction parse_direction(std::string_view text) {
  if (text == "along") return Direction::along;
  if (text == "cross") return Direction::cross;
  if (text == "vertical") return Direction::vertical;
  throw InputError("unknown direction '" + std::string(text) + "'");
}

double raw_monitor_lateral(double d_gnss, double d_map, Direction direction) {
  if (direction == Direction::along) {
    throw ParameterError("lateral monitor direction must be cross or vertical");
  }
  return d_gnss - d_map;
}

double ewma_update(double prev, double raw, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw ParameterError("EWMA alpha must lie in (0, 1]");
  return alpha * raw + (1.0 - alpha) * prev;
}

double MonitorInputModel::raw_variance() const noexcept {
  double v = white_variance;
  for (const auto& t : gm_terms) v += 2.0 * t.variance * (1.0 - t.phi);
  return v;
}

double ewma_variance(const MonitorInputModel& input, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) throw ParameterError("EWMA alpha must lie in (0, 1]");
  const double beta = 1.0 - alpha;
  double v = alpha / (2.0 - alpha) * input.white_variance;
  for (const auto& t : input.gm_terms) {
    v += 2.0 * t.variance * alpha * alpha * (1.0 - t.phi) / ((2.0 - alpha) * (1.0 - beta * t.phi));
  }
  return v;
}

double monitor_sigma(const MonitorInputModel& input, double alpha) {
  return std::sqrt(ewma_variance(input, alpha));
}

MonitorInputModel gnss_monitor_input(std::span<const double> coefficients,
                                     std::span<const std::array<Gm1Params, kErrorSourceCount>> budgets,
                                     double dt) {
  if (coefficients.size() != budgets.size()) {
    throw InputError("one solution coefficient per satellite budget expected");
  }
  MonitorInputModel model;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    const double c2 = coefficients[i] * coefficients[i];
    for (const auto& params : budgets[i]) {
      const double phi = gm1_discrete_coeffs(params, dt).phi;
      const double variance = c2 * params.variance_r0;
      auto it = std::find_if(model.gm_terms.begin(), model.gm_terms.end(),
                             [phi](const DifferencedGmTerm& t) { return t.phi == phi; });
      if (it == model.gm_terms.end()) {
        model.gm_terms.push_back({variance, phi});
      } else {
        it->variance += variance;
      }
    }
  }
  return model;
}

double gnss_position_sigma(std::span<const double> coefficients,
                           std::span<const std::array<Gm1Params, kErrorSourceCount>> budgets) {
  if (coefficients.size() != budgets.size()) {
    throw InputError("one solution coefficient per satellite budget expected");
  }
  double v = 0.0;
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    double r = 0.0;
    for (const auto& p : budgets[i]) r += p.variance_r0;
    v += coefficients[i] * coefficients[i] * r;
  }
  return std::sqrt(v);
}

double threshold_factor(double p_fa) {
  if (!(p_fa > 0.0) || !(p_fa < 1.0)) throw ParameterError("p_fa must lie in (0, 1)");
  const boost::math::normal_distribution<double> unit;
  return boost::math::quantile(boost::math::complement(unit, p_fa / 2.0));
}

double threshold(double sigma, double p_fa) {
  if (!(sigma > 0.0)) throw ParameterError("monitor sigma must be positive");
  return threshold_factor(p_fa) * sigma;
}

MonitorBank::MonitorBank(Direction direction, std::span<const double> alphas,
                         std::span<const double> sigmas, double p_fa)
    : direction_(direction),
      alphas_(alphas.begin(), alphas.end()),
      values_(alphas.size(), 0.0),
      sigmas_(sigmas.begin(), sigmas.end()) {
  if (alphas.size() != sigmas.size() || alphas.empty()) {
    throw ParameterError("monitor bank needs one sigma per alpha");
  }
  for (double a : alphas_) {
    if (!(a > 0.0) || a > 1.0) throw ParameterError("EWMA alpha must lie in (0, 1]");
  }
  const double k = threshold_factor(p_fa);
  thresholds_.reserve(sigmas_.size());
  for (double s : sigmas_) {
    if (!(s > 0.0)) throw ParameterError("monitor sigma must be positive");
    thresholds_.push_back(k * s);
  }
}

void MonitorBank::reset() noexcept { std::fill(values_.begin(), values_.end(), 0.0); }

DetectionOutcome detect(std::span<const MonitorBank> banks, double epoch,
                        double epochs_since_start, const WarmupPolicy& warmup) {
  DetectionOutcome best;      // largest ratio overall
  DetectionOutcome settled;   // largest exceeding ratio outside warm-up
  best.epoch = settled.epoch = epoch;
  for (const auto& bank : banks) {
    for (std::size_t i = 0; i < bank.size(); ++i) {
      const double ratio = std::abs(bank.values()[i]) / bank.thresholds()[i];
      const bool exceeds = std::abs(bank.values()[i]) > bank.thresholds()[i];
      if (ratio > best.exceed_ratio) {
        best.exceed_ratio = ratio;
        best.direction = bank.direction();
        best.alpha = bank.alphas()[i];
        best.detected = exceeds;
      }
      if (exceeds && !warmup.in_warmup(epochs_since_start, bank.alphas()[i]) &&
          ratio > settled.exceed_ratio) {
        settled.exceed_ratio = ratio;
        settled.direction = bank.direction();
        settled.alpha = bank.alphas()[i];
        settled.detected = true;
      }
    }
  }
  if (settled.detected) return settled;
  best.warmup = best.detected;
  return best;
}

LinearFit fit_threshold_regression(std::span<const CalibrationPair> pairs) {
  if (pairs.size() < 2) throw CalibrationError("threshold regression needs at least 2 points");
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& p : pairs) {
    mx += p.predictor;
    my += p.response;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : pairs) {
    sxx += (p.predictor - mx) * (p.predictor - mx);
    sxy += (p.predictor - mx) * (p.response - my);
  }
  if (!(sxx > 0.0)) throw CalibrationError("threshold regression predictor has zero variance");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& p : pairs) {
    const double r = p.response - fit.predict(p.predictor);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

}  // namespace vbdiag
