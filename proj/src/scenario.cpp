#include "vbdiag/scenario.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <sstream>

#include "vbdiag/constellation.hpp"
#include "vbdiag/errors.hpp"

namespace vbdiag {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto comma = s.find(',', pos);
    out.push_back(trim(s.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Value conversion failures carry only a message; the caller adds the line.
struct ValueError {
  std::string message;
};

double to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValueError{"expected a number, got '" + std::string(s) + "'"};
  }
  return v;
}

template <typename Int>
Int to_integer(std::string_view s) {
  s = trim(s);
  Int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValueError{"expected a non-negative integer, got '" + std::string(s) + "'"};
  }
  return v;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "off" || s == "0" || s == "no") return false;
  throw ValueError{"expected true/false, got '" + std::string(s) + "'"};
}

std::vector<double> to_double_list(std::string_view s) {
  std::vector<double> out;
  for (auto item : split_list(s)) out.push_back(to_double(item));
  return out;
}

std::string fmt_double(double v) { return fmt::format("{}", v); }

std::string fmt_list(const std::vector<double>& values) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(fmt_double(v));
  return fmt::format("{}", fmt::join(parts, ", "));
}

struct Key {
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <typename Member>
Key number_key(Member ScenarioConfig::*member) {
  return {[member](ScenarioConfig& c, std::string_view v) { c.*member = to_double(v); },
          [member](const ScenarioConfig& c) { return fmt_double(c.*member); }};
}

#define VBDIAG_NESTED_NUMBER(path)                                                \
  Key {                                                                           \
    [](ScenarioConfig& c, std::string_view v) { c.path = to_double(v); },        \
        [](const ScenarioConfig& c) { return fmt_double(c.path); }                \
  }

// Ordered so that serialize_scenario output is grouped by section.
const std::vector<std::pair<std::string, Key>>& key_table() {
  static const std::vector<std::pair<std::string, Key>> table = {
      {"skyplot",
       {[](ScenarioConfig& c, std::string_view v) { c.skyplot = std::string(trim(v)); },
        [](const ScenarioConfig& c) { return c.skyplot; }}},
      {"mask_deg", number_key(&ScenarioConfig::mask_deg)},
      {"headings",
       {[](ScenarioConfig& c, std::string_view v) { c.headings = to_double_list(v); },
        [](const ScenarioConfig& c) { return fmt_list(c.headings); }}},
      {"heading_relative_to_fault",
       {[](ScenarioConfig& c, std::string_view v) { c.heading_relative_to_fault = to_bool(v); },
        [](const ScenarioConfig& c) { return std::string(c.heading_relative_to_fault ? "true" : "false"); }}},
      {"duration", number_key(&ScenarioConfig::duration)},
      {"dt", number_key(&ScenarioConfig::dt)},
      {"reps",
       {[](ScenarioConfig& c, std::string_view v) { c.reps = to_integer<std::size_t>(v); },
        [](const ScenarioConfig& c) { return std::to_string(c.reps); }}},
      {"failure_threshold", number_key(&ScenarioConfig::failure_threshold)},
      {"p_fa", number_key(&ScenarioConfig::p_fa)},
      {"seed",
       {[](ScenarioConfig& c, std::string_view v) { c.master_seed = to_integer<std::uint64_t>(v); },
        [](const ScenarioConfig& c) { return std::to_string(c.master_seed); }}},
      {"speed", number_key(&ScenarioConfig::speed)},
      {"fault.kind",
       {[](ScenarioConfig& c, std::string_view v) {
          try {
            c.fault.kind = parse_fault_kind(trim(v));
          } catch (const InputError& e) {
            throw ValueError{e.what()};
          }
        },
        [](const ScenarioConfig& c) { return std::string(to_string(c.fault.kind)); }}},
      {"fault.satellite",
       {[](ScenarioConfig& c, std::string_view v) {
          try {
            c.fault.satellite = SatelliteId::parse(v);
          } catch (const InputError& e) {
            throw ValueError{e.what()};
          }
        },
        [](const ScenarioConfig& c) { return c.fault.satellite.to_string(); }}},
      {"fault.start", VBDIAG_NESTED_NUMBER(fault.start)},
      {"fault.rate", VBDIAG_NESTED_NUMBER(fault.rate)},
      {"fault.magnitude", VBDIAG_NESTED_NUMBER(fault.magnitude)},
      {"errors.iono.vertical_sigma", VBDIAG_NESTED_NUMBER(errors.iono_vertical_sigma)},
      {"errors.iono.tau", VBDIAG_NESTED_NUMBER(errors.iono_tau)},
      {"errors.iono.shell_height", VBDIAG_NESTED_NUMBER(errors.iono_shell_height)},
      {"errors.iono.earth_radius", VBDIAG_NESTED_NUMBER(errors.earth_radius)},
      {"errors.tropo.zenith_sigma", VBDIAG_NESTED_NUMBER(errors.tropo_zenith_sigma)},
      {"errors.tropo.tau", VBDIAG_NESTED_NUMBER(errors.tropo_tau)},
      {"errors.orbit_clock.variance", VBDIAG_NESTED_NUMBER(errors.orbit_clock_variance)},
      {"errors.orbit_clock.tau", VBDIAG_NESTED_NUMBER(errors.orbit_clock_tau)},
      {"errors.user.variance", VBDIAG_NESTED_NUMBER(errors.user_variance)},
      {"errors.user.tau", VBDIAG_NESTED_NUMBER(errors.user_tau)},
      {"odometer.sigma_v", VBDIAG_NESTED_NUMBER(odometer.sigma_v)},
      {"odometer.rate", VBDIAG_NESTED_NUMBER(odometer.rate)},
      {"map.enabled",
       {[](ScenarioConfig& c, std::string_view v) { c.use_map = to_bool(v); },
        [](const ScenarioConfig& c) { return std::string(c.use_map ? "true" : "false"); }}},
      {"map.sigma", VBDIAG_NESTED_NUMBER(map.sigma_map)},
      {"map.tau", VBDIAG_NESTED_NUMBER(map.tau_map)},
      {"monitors.alphas",
       {[](ScenarioConfig& c, std::string_view v) { c.alphas = to_double_list(v); },
        [](const ScenarioConfig& c) { return fmt_list(c.alphas); }}},
      {"monitors.warmup_time_constants", number_key(&ScenarioConfig::warmup_time_constants)},
      {"hazard.balise_spacing", number_key(&ScenarioConfig::balise_spacing)},
      {"hazard.jump_threshold", number_key(&ScenarioConfig::jump_threshold)},
      {"pmd.grid_min", number_key(&ScenarioConfig::pmd_grid_min)},
      {"pmd.grid_max", number_key(&ScenarioConfig::pmd_grid_max)},
      {"pmd.grid_step", number_key(&ScenarioConfig::pmd_grid_step)},
      {"calibration.skyplots",
       {[](ScenarioConfig& c, std::string_view v) {
          c.calibration_skyplots.clear();
          for (auto item : split_list(v)) c.calibration_skyplots.emplace_back(item);
        },
        [](const ScenarioConfig& c) { return fmt::format("{}", fmt::join(c.calibration_skyplots, ", ")); }}},
  };
  return table;
}

#undef VBDIAG_NESTED_NUMBER

const Key* find_key(std::string_view name) {
  for (const auto& [k, v] : key_table()) {
    if (k == name) return &v;
  }
  return nullptr;
}

struct Violation {
  std::string key;
  std::string message;
};

std::optional<Violation> check(const ScenarioConfig& c) {
  auto positive = [](double v) { return v > 0.0; };
  if (c.skyplot.empty()) return Violation{"skyplot", "skyplot must be set"};
  if (c.mask_deg < 0.0 || c.mask_deg >= 90.0) return Violation{"mask_deg", "mask must lie in [0, 90)"};
  if (c.headings.empty()) return Violation{"headings", "at least one heading is required"};
  for (double h : c.headings) {
    if (h < 0.0 || h >= 360.0) return Violation{"headings", "headings must lie in [0, 360)"};
  }
  if (!positive(c.dt)) return Violation{"dt", "dt must be positive"};
  if (c.fault.start < 0.0) return Violation{"fault.start", "fault start must be non-negative"};
  if (!(c.duration > c.fault.start)) return Violation{"duration", "duration must exceed fault.start"};
  if (c.reps < 1) return Violation{"reps", "reps must be at least 1"};
  if (!positive(c.failure_threshold)) {
    return Violation{"failure_threshold", "failure threshold must be positive"};
  }
  if (!(c.p_fa > 0.0 && c.p_fa < 1.0)) return Violation{"p_fa", "p_fa must lie in (0, 1)"};
  if (c.fault.kind == FaultKind::ramp && c.fault.rate < 0.0) {
    return Violation{"fault.rate", "ramp rate must be non-negative"};
  }
  if (c.speed < 0.0) return Violation{"speed", "speed must be non-negative"};
  const std::pair<const char*, double> taus[] = {{"errors.iono.tau", c.errors.iono_tau},
                                                 {"errors.tropo.tau", c.errors.tropo_tau},
                                                 {"errors.orbit_clock.tau", c.errors.orbit_clock_tau},
                                                 {"errors.user.tau", c.errors.user_tau},
                                                 {"map.tau", c.map.tau_map},
                                                 {"odometer.rate", c.odometer.rate}};
  for (const auto& [key, v] : taus) {
    if (!positive(v)) return Violation{key, std::string(key) + " must be positive"};
  }
  const std::pair<const char*, double> nonneg[] = {
      {"errors.iono.vertical_sigma", c.errors.iono_vertical_sigma},
      {"errors.tropo.zenith_sigma", c.errors.tropo_zenith_sigma},
      {"errors.orbit_clock.variance", c.errors.orbit_clock_variance},
      {"errors.user.variance", c.errors.user_variance},
      {"odometer.sigma_v", c.odometer.sigma_v},
      {"map.sigma", c.map.sigma_map},
      {"errors.iono.shell_height", c.errors.iono_shell_height}};
  for (const auto& [key, v] : nonneg) {
    if (v < 0.0) return Violation{key, std::string(key) + " must be non-negative"};
  }
  if (!positive(c.errors.earth_radius)) {
    return Violation{"errors.iono.earth_radius", "earth radius must be positive"};
  }
  if (c.alphas.empty()) return Violation{"monitors.alphas", "at least one alpha is required"};
  for (double a : c.alphas) {
    if (!(a > 0.0 && a <= 1.0)) return Violation{"monitors.alphas", "alphas must lie in (0, 1]"};
  }
  if (c.warmup_time_constants < 0.0) {
    return Violation{"monitors.warmup_time_constants", "warm-up must be non-negative"};
  }
  if (!positive(c.balise_spacing)) return Violation{"hazard.balise_spacing", "spacing must be positive"};
  if (!positive(c.jump_threshold)) return Violation{"hazard.jump_threshold", "jump threshold must be positive"};
  if (!positive(c.pmd_grid_step)) return Violation{"pmd.grid_step", "grid step must be positive"};
  if (c.pmd_grid_max < c.pmd_grid_min) return Violation{"pmd.grid_max", "grid max below grid min"};
  return std::nullopt;
}

bool skyplot_available(const ScenarioConfig& c, const std::string& ref) {
  if (is_builtin_skyplot(ref)) return true;
  std::error_code ec;
  return std::filesystem::is_regular_file(c.resolved_skyplot(ref), ec);
}

}  // namespace

std::size_t ScenarioConfig::epoch_count() const {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

std::vector<double> ScenarioConfig::pmd_grid() const {
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((pmd_grid_max - pmd_grid_min) / pmd_grid_step + 1e-9));
  grid.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid.push_back(pmd_grid_min + static_cast<double>(i) * pmd_grid_step);
  return grid;
}

std::string ScenarioConfig::resolved_skyplot(const std::string& name_or_path) const {
  if (is_builtin_skyplot(name_or_path)) return name_or_path;
  std::filesystem::path p(name_or_path);
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.string();
}

void validate(const ScenarioConfig& config) {
  if (auto v = check(config)) throw ParameterError(v->key + ": " + v->message);
}

ScenarioConfig parse_scenario(std::istream& in, const std::string& source,
                              const std::filesystem::path& base_dir) {
  ScenarioConfig config;
  config.base_dir = base_dir;
  std::map<std::string, std::size_t, std::less<>> key_lines;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected 'key = value'");
    const std::string key(trim(view.substr(0, eq)));
    const auto* handler = find_key(key);
    if (!handler) throw ParseError(source, line_no, "unknown key '" + key + "'");
    if (key_lines.count(key)) throw ParseError(source, line_no, "duplicate key '" + key + "'");
    key_lines[key] = line_no;
    try {
      handler->set(config, view.substr(eq + 1));
    } catch (const ValueError& e) {
      throw ParseError(source, line_no, key + ": " + e.message);
    }
  }

  auto line_of = [&](const std::string& key) -> std::size_t {
    auto it = key_lines.find(key);
    return it == key_lines.end() ? 0 : it->second;
  };
  if (auto v = check(config)) throw ParseError(source, line_of(v->key), v->key + ": " + v->message);
  if (!skyplot_available(config, config.skyplot)) {
    throw ParseError(source, line_of("skyplot"), "skyplot file not found: " + config.resolved_skyplot(config.skyplot));
  }
  for (const auto& ref : config.calibration_skyplots) {
    if (!skyplot_available(config, ref)) {
      throw ParseError(source, line_of("calibration.skyplots"),
                       "skyplot file not found: " + config.resolved_skyplot(ref));
    }
  }
  return config;
}

ScenarioConfig parse_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open scenario file");
  return parse_scenario(in, path.string(), path.parent_path());
}

std::string serialize_scenario(const ScenarioConfig& config) {
  std::string out;
  for (const auto& [key, handler] : key_table()) {
    out += key;
    out += " = ";
    out += handler.get(config);
    out += '\n';
  }
  return out;
}

}  // namespace vbdiag
