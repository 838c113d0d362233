#pragma once

#include <span>
#include <string_view>

#include "vbdiag/constellation.hpp"

namespace vbdiag {

enum class FaultKind { ramp, jump };

std::string_view to_string(FaultKind kind);
FaultKind parse_fault_kind(std::string_view text);

/// Range fault on one satellite: a ramp of `rate` [m/s] or a step of
/// `magnitude` [m], starting at `start` [s].
struct FaultProfile {
  FaultKind kind = FaultKind::ramp;
  SatelliteId satellite{Constellation::gps, 8};
  double start = 5000.0;
  double rate = 0.1;
  double magnitude = 0.0;

  bool operator==(const FaultProfile&) const = default;
};

/// Ramp: max(0, t - start) * rate. Jump: magnitude once t >= start.
double fault_bias(const FaultProfile& profile, double t) noexcept;

enum class HazardClass { none, vb1a, vb1b, vb2 };

std::string_view to_string(HazardClass c);
HazardClass parse_hazard_class(std::string_view text);

struct HazardCriteria {
  double balise_spacing = 2000.0;  // m
  double jump_threshold = 20.0;    // m, single-epoch change for VB1B
  double failure_level = 20.0;     // m, along-track error for VB2

  bool operator==(const HazardCriteria&) const = default;
};

/// Streaming classifier of an along-track error trace.
///   VB1A: some single-epoch change exceeds the balise spacing.
///   VB1B: some single-epoch change exceeds the jump threshold only.
///   VB2:  the failure level is reached without any such jump.
class HazardTracker {
 public:
  explicit HazardTracker(const HazardCriteria& criteria = {}) : criteria_(criteria) {}

  void observe(double along_error) noexcept;
  HazardClass result() const noexcept;
  bool empty() const noexcept { return count_ == 0; }

 private:
  HazardCriteria criteria_;
  long count_ = 0;
  double previous_ = 0.0;
  double max_step_ = 0.0;
  bool failure_reached_ = false;
};

/// Throws InputError on an empty trace.
HazardClass classify_hazard(std::span<const double> along_error_trace,
                            const HazardCriteria& criteria = {});

}  // namespace vbdiag
