#include "vbdiag/sensors.hpp"

#include "vbdiag/errors.hpp"

namespace vbdiag {

void validate(const OdometerModel& model) {
  if (model.sigma_v < 0.0) throw ParameterError("odometer sigma_v must be non-negative");
  if (!(model.rate > 0.0)) throw ParameterError("odometer rate must be positive");
}

void validate(const TrackMapModel& model) {
  if (model.sigma_map < 0.0) throw ParameterError("map sigma must be non-negative");
  if (!(model.tau_map > 0.0)) throw ParameterError("map tau must be positive");
}

}  // namespace vbdiag
