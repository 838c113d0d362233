#include "vbdiag/constellation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "vbdiag/errors.hpp"

namespace vbdiag {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool parse_double(std::string_view text, double& value) {
  text = trim(text);
  // std::from_chars for double is available in libstdc++ 11.
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

bool parse_int(std::string_view text, int& value) {
  text = trim(text);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::string_view to_string(Constellation c) {
  return c == Constellation::gps ? "GPS" : "GALILEO";
}

std::string SatelliteId::to_string() const {
  std::string out(1, constellation == Constellation::gps ? 'G' : 'E');
  if (prn < 10) out += '0';
  out += std::to_string(prn);
  return out;
}

SatelliteId SatelliteId::parse(std::string_view text) {
  text = trim(text);
  if (text.size() < 2) throw InputError("bad satellite id '" + std::string(text) + "'");
  SatelliteId id;
  switch (std::toupper(static_cast<unsigned char>(text.front()))) {
    case 'G': id.constellation = Constellation::gps; break;
    case 'E': id.constellation = Constellation::galileo; break;
    default: throw InputError("bad satellite id '" + std::string(text) + "'");
  }
  if (!parse_int(text.substr(1), id.prn) || id.prn <= 0) {
    throw InputError("bad satellite id '" + std::string(text) + "'");
  }
  return id;
}

bool Skyplot::dual_constellation() const noexcept {
  const bool gps = std::any_of(satellites.begin(), satellites.end(),
                               [](const auto& s) { return s.id.constellation == Constellation::gps; });
  const bool gal = std::any_of(satellites.begin(), satellites.end(), [](const auto& s) {
    return s.id.constellation == Constellation::galileo;
  });
  return gps && gal;
}

std::size_t Skyplot::parameter_count() const noexcept { return dual_constellation() ? 5 : 4; }

std::size_t Skyplot::index_of(const SatelliteId& id) const {
  for (std::size_t i = 0; i < satellites.size(); ++i) {
    if (satellites[i].id == id) return i;
  }
  throw GeometryError("satellite " + id.to_string() + " is not in the skyplot");
}

std::string Skyplot::constellation_label() const {
  if (dual_constellation()) return "GPS+GALILEO";
  if (satellites.empty()) return "";
  return std::string(to_string(satellites.front().id.constellation));
}

Skyplot parse_skyplot(std::istream& in, const SatelliteId& faulty_id, double mask_deg,
                      const std::string& source) {
  Skyplot skyplot;
  skyplot.faulty_id = faulty_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;

    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
      auto comma = view.find(',', pos);
      fields.push_back(trim(view.substr(pos, comma - pos)));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 4) {
      throw ParseError(source, line_no, "expected 4 fields constellation,id,azimuth_deg,elevation_deg");
    }
    SatelliteState sat;
    const auto name = upper(fields[0]);
    if (name == "GPS" || name == "G") {
      sat.id.constellation = Constellation::gps;
    } else if (name == "GALILEO" || name == "GAL" || name == "E") {
      sat.id.constellation = Constellation::galileo;
    } else {
      throw ParseError(source, line_no, "unknown constellation '" + std::string(fields[0]) + "'");
    }
    if (!parse_int(fields[1], sat.id.prn) || sat.id.prn <= 0) {
      throw ParseError(source, line_no, "bad satellite id '" + std::string(fields[1]) + "'");
    }
    if (!parse_double(fields[2], sat.azimuth_deg) || !parse_double(fields[3], sat.elevation_deg)) {
      throw ParseError(source, line_no, "bad azimuth/elevation");
    }
    if (sat.elevation_deg > 90.0 || sat.azimuth_deg < -360.0 || sat.azimuth_deg > 720.0) {
      throw ParseError(source, line_no, "azimuth/elevation out of range");
    }
    sat.azimuth_deg = std::fmod(sat.azimuth_deg + 360.0, 360.0);
    for (const auto& existing : skyplot.satellites) {
      if (existing.id == sat.id) {
        throw ParseError(source, line_no, "duplicate satellite " + sat.id.to_string());
      }
    }
    if (sat.elevation_deg <= mask_deg) continue;
    skyplot.satellites.push_back(sat);
  }
  return skyplot;
}

Skyplot load_skyplot(const std::string& path, const SatelliteId& faulty_id, double mask_deg) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open skyplot file");
  return parse_skyplot(in, faulty_id, mask_deg, path);
}

Skyplot resolve_skyplot(const std::string& name_or_path, const SatelliteId& faulty_id,
                        double mask_deg) {
  if (is_builtin_skyplot(name_or_path)) {
    std::istringstream in{std::string(builtin_skyplot_text(name_or_path))};
    return parse_skyplot(in, faulty_id, mask_deg, name_or_path);
  }
  return load_skyplot(name_or_path, faulty_id, mask_deg);
}

void validate_skyplot(const Skyplot& skyplot, double mask_deg) {
  const std::size_t needed = skyplot.parameter_count();
  if (skyplot.size() < needed) {
    throw GeometryError("under-determined geometry: " + std::to_string(skyplot.size()) +
                        " satellites for " + std::to_string(needed) + " parameters");
  }
  for (const auto& s : skyplot.satellites) {
    if (!(s.elevation_deg > mask_deg) || s.elevation_deg > 90.0) {
      throw GeometryError("satellite " + s.id.to_string() + " outside the elevation mask");
    }
  }
  (void)skyplot.index_of(skyplot.faulty_id);
}

Eigen::Vector3d line_of_sight(double azimuth_deg, double elevation_deg) {
  const double az = azimuth_deg * kDegToRad;
  const double el = elevation_deg * kDegToRad;
  return {std::cos(el) * std::sin(az), std::cos(el) * std::cos(az), std::sin(el)};
}

Eigen::MatrixXd geometry_matrix(const Skyplot& skyplot) {
  const auto n_params = static_cast<Eigen::Index>(skyplot.parameter_count());
  const auto n_sats = static_cast<Eigen::Index>(skyplot.size());
  if (n_sats < n_params) {
    throw GeometryError("under-determined geometry: " + std::to_string(n_sats) + " satellites for " +
                        std::to_string(n_params) + " parameters");
  }
  const bool dual = n_params == 5;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n_sats, n_params);
  for (Eigen::Index i = 0; i < n_sats; ++i) {
    const auto& sat = skyplot.satellites[static_cast<std::size_t>(i)];
    g.block<1, 3>(i, 0) = -line_of_sight(sat.azimuth_deg, sat.elevation_deg).transpose();
    g(i, 3) = 1.0;
    if (dual && sat.id.constellation == Constellation::galileo) g(i, 4) = 1.0;
  }
  return g;
}

SolutionMatrix solution_matrix(const Eigen::MatrixXd& geometry, const Eigen::VectorXd& weights) {
  if (weights.size() != geometry.rows()) {
    throw GeometryError("weight count does not match the geometry matrix");
  }
  if (geometry.rows() < geometry.cols()) throw GeometryError("under-determined geometry");
  const Eigen::MatrixXd gtw = geometry.transpose() * weights.asDiagonal();
  const Eigen::MatrixXd normal = gtw * geometry;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  // Relative rank test; a degenerate skyplot (coplanar lines of sight) lands here.
  lu.setThreshold(1e-10);
  if (!lu.isInvertible()) throw GeometryError("singular normal matrix");

  SolutionMatrix s;
  s.covariance = lu.inverse();
  s.full = s.covariance * gtw;
  s.enu = s.full.topRows<3>();
  return s;
}

Eigen::Matrix3d enu_to_track(const TrackFrame& frame) {
  const double h = frame.heading_deg * kDegToRad;
  Eigen::Matrix3d r;
  r << std::sin(h), std::cos(h), 0.0,
       std::cos(h), -std::sin(h), 0.0,
       0.0, 0.0, 1.0;
  return r;
}

Eigen::Matrix<double, 3, Eigen::Dynamic> track_solution(const SolutionMatrix& solution,
                                                        const TrackFrame& frame) {
  return enu_to_track(frame) * solution.enu;
}

Eigen::Vector3d position_error(const SolutionMatrix& solution, const TrackFrame& frame,
                               const Eigen::VectorXd& range_errors) {
  if (range_errors.size() != solution.enu.cols()) {
    throw GeometryError("range error count does not match the solution matrix");
  }
  return enu_to_track(frame) * (solution.enu * range_errors);
}

}  // namespace vbdiag
