#include "vbdiag/faults.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vbdiag/errors.hpp"

namespace vbdiag {

std::string_view to_string(FaultKind kind) { return kind == FaultKind::ramp ? "ramp" : "jump"; }

FaultKind parse_fault_kind(std::string_view text) {
  if (text == "ramp") return FaultKind::ramp;
  if (text == "jump") return FaultKind::jump;
  throw InputError("unknown fault kind '" + std::string(text) + "'");
}

double fault_bias(const FaultProfile& profile, double t) noexcept {
  switch (profile.kind) {
    case FaultKind::ramp: return std::max(0.0, t - profile.start) * profile.rate;
    case FaultKind::jump: return t >= profile.start ? profile.magnitude : 0.0;
  }
  return 0.0;
}

std::string_view to_string(HazardClass c) {
  switch (c) {
    case HazardClass::none: return "none";
    case HazardClass::vb1a: return "VB1A";
    case HazardClass::vb1b: return "VB1B";
    case HazardClass::vb2: return "VB2";
  }
  return "?";
}

HazardClass parse_hazard_class(std::string_view text) {
  if (text == "none") return HazardClass::none;
  if (text == "VB1A") return HazardClass::vb1a;
  if (text == "VB1B") return HazardClass::vb1b;
  if (text == "VB2") return HazardClass::vb2;
  throw InputError("unknown hazard class '" + std::string(text) + "'");
}

void HazardTracker::observe(double along_error) noexcept {
  if (count_ > 0) max_step_ = std::max(max_step_, std::abs(along_error - previous_));
  previous_ = along_error;
  ++count_;
  if (std::abs(along_error) >= criteria_.failure_level) failure_reached_ = true;
}

HazardClass HazardTracker::result() const noexcept {
  if (max_step_ > criteria_.balise_spacing) return HazardClass::vb1a;
  if (max_step_ > criteria_.jump_threshold) return HazardClass::vb1b;
  if (failure_reached_) return HazardClass::vb2;
  return HazardClass::none;
}

HazardClass classify_hazard(std::span<const double> along_error_trace,
                            const HazardCriteria& criteria) {
  if (along_error_trace.empty()) throw InputError("hazard classification needs a non-empty trace");
  HazardTracker tracker(criteria);
  for (double e : along_error_trace) tracker.observe(e);
  return tracker.result();
}

}  // namespace vbdiag
