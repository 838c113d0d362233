#include "vbdiag/report.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "vbdiag/errors.hpp"

namespace vbdiag {

namespace {

std::string opt(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : std::string{}; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool to_double(std::string_view s, double& v) {
  s = trim(s);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

void write_records_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kRecordsHeader << '\n';
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.run_index, r.heading_deg, r.t_fault,
                       opt(r.t_failure), opt(r.t_detect),
                       r.direction ? std::string(to_string(*r.direction)) : std::string{},
                       opt(r.alpha), opt(r.t_d()), opt(r.t_dsf()), r.warmup_flag ? 1 : 0,
                       to_string(r.hazard));
  }
}

void write_pmd_csv(std::ostream& out, std::span<const RunRecord> records, std::span<const double> grid) {
  out << kPmdHeader << '\n';
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() && records[end].heading_deg == records[begin].heading_deg) ++end;
    if (auto curve = pmd_curve(records.subspan(begin, end - begin), grid)) {
      for (std::size_t i = 0; i < curve->grid.size(); ++i) {
        out << fmt::format("{},{},{}\n", records[begin].heading_deg, curve->grid[i], curve->pmd[i]);
      }
    }
    begin = end;
  }
}

void write_summary_csv(std::ostream& out, std::span<const RunRecord> records, const FaultProfile& fault,
                       const std::string& constellation) {
  out << kSummaryHeader << '\n';
  const std::string rate = fault.kind == FaultKind::ramp ? fmt::format("{}", fault.rate) : std::string{};
  for (const auto& e : expected_times(records)) {
    out << fmt::format("{},{},{},{},{},{}\n", e.heading_deg, rate, constellation, opt(e.e_td),
                       opt(e.e_tdsf), e.censored);
  }
}

void write_calibration_csv(std::ostream& out, std::span<const CalibrationRow> rows) {
  out << kCalibrationHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{}\n", to_string(r.direction), r.alpha, r.sigma, r.threshold,
                       r.fit.slope, r.fit.intercept, r.fit.residual_rms);
  }
}

std::vector<double> read_trace_csv(std::istream& in, const std::string& source) {
  std::vector<double> errors;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto comma = view.find(',');
    if (comma == std::string_view::npos) throw ParseError(source, line_no, "expected 't,along_error_m'");
    double t = 0.0, e = 0.0;
    if (!to_double(view.substr(0, comma), t) || !to_double(view.substr(comma + 1), e)) {
      if (errors.empty() && line_no == 1) continue;  // header
      throw ParseError(source, line_no, "expected two numbers");
    }
    errors.push_back(e);
  }
  return errors;
}

void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vbdiag
