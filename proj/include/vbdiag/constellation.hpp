#pragma once

#include <Eigen/Dense>
#include <compare>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vbdiag {

enum class Constellation { gps, galileo };

std::string_view to_string(Constellation c);

/// Constellation-scoped satellite identifier, written "G08" / "E23".
struct SatelliteId {
  Constellation constellation = Constellation::gps;
  int prn = 0;

  auto operator<=>(const SatelliteId&) const = default;

  std::string to_string() const;
  /// Accepts "G8", "G08", "E23" (case-insensitive prefix).
  static SatelliteId parse(std::string_view text);
};

struct SatelliteState {
  SatelliteId id;
  double azimuth_deg = 0.0;    // [0, 360)
  double elevation_deg = 0.0;  // (0, 90]
};

/// Fixed satellite geometry for one scenario, with the fault-bearing satellite.
struct Skyplot {
  std::vector<SatelliteState> satellites;
  SatelliteId faulty_id;

  std::size_t size() const noexcept { return satellites.size(); }
  bool dual_constellation() const noexcept;
  /// 4 for a single constellation, 5 when GPS and Galileo are both present.
  std::size_t parameter_count() const noexcept;
  /// Index of `id` in `satellites`; throws GeometryError when absent.
  std::size_t index_of(const SatelliteId& id) const;
  /// "GPS" or "GPS+GALILEO".
  std::string constellation_label() const;
};

inline constexpr double kDefaultMaskDeg = 5.0;

/// Parses `constellation,id,azimuth_deg,elevation_deg` lines ('#' comments,
/// blank lines allowed). Satellites at or below `mask_deg` are dropped.
/// Throws ParseError with the offending line number.
Skyplot parse_skyplot(std::istream& in, const SatelliteId& faulty_id,
                      double mask_deg = kDefaultMaskDeg, const std::string& source = "<skyplot>");
Skyplot load_skyplot(const std::string& path, const SatelliteId& faulty_id,
                     double mask_deg = kDefaultMaskDeg);

/// Bundled reference skyplots: "gps24", "dual54".
bool is_builtin_skyplot(std::string_view name);
std::string_view builtin_skyplot_text(std::string_view name);

/// Resolves a builtin name or a file path.
Skyplot resolve_skyplot(const std::string& name_or_path, const SatelliteId& faulty_id,
                        double mask_deg = kDefaultMaskDeg);

/// Checks count, faulty-satellite presence and elevation bounds; throws
/// GeometryError ("under-determined geometry", ...) on violation.
void validate_skyplot(const Skyplot& skyplot, double mask_deg = kDefaultMaskDeg);

/// Unit line of sight (east, north, up) for an azimuth/elevation pair.
Eigen::Vector3d line_of_sight(double azimuth_deg, double elevation_deg);

/// Rows [-e_east, -e_north, -e_up, 1, (1 if Galileo in a dual skyplot)].
Eigen::MatrixXd geometry_matrix(const Skyplot& skyplot);

/// Spatial rows of the weighted least-squares solution (G'WG)^-1 G'W, ENU.
struct SolutionMatrix {
  Eigen::Matrix<double, 3, Eigen::Dynamic> enu;
  /// Full parameter-block solution including clock rows, kept for checks.
  Eigen::MatrixXd full;
  /// (G'WG)^-1.
  Eigen::MatrixXd covariance;
};

SolutionMatrix solution_matrix(const Eigen::MatrixXd& geometry, const Eigen::VectorXd& weights);

/// Along-track axis azimuth, clockwise from north [deg].
struct TrackFrame {
  double heading_deg = 0.0;
};

/// Rows are the along, cross and vertical unit vectors expressed in ENU.
Eigen::Matrix3d enu_to_track(const TrackFrame& frame);

/// Solution rows rotated into the track frame (along, cross, vertical).
Eigen::Matrix<double, 3, Eigen::Dynamic> track_solution(const SolutionMatrix& solution,
                                                        const TrackFrame& frame);

/// (along, cross, vertical) position error for the given per-satellite range errors.
Eigen::Vector3d position_error(const SolutionMatrix& solution, const TrackFrame& frame,
                               const Eigen::VectorXd& range_errors);

}  // namespace vbdiag
