#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vbdiag/sim.hpp"

namespace vbdiag {

inline constexpr const char* kRecordsHeader =
    "run,heading_deg,t_fault_s,t_failure_s,t_detect_s,direction,alpha,t_d_s,t_dsf_s,warmup_flag,hazard_class";
inline constexpr const char* kPmdHeader = "heading_deg,t_dsf_s,pmd";
inline constexpr const char* kSummaryHeader =
    "heading_deg,rate_mps,constellation,e_td_s,e_tdsf_s,censored_count";
inline constexpr const char* kCalibrationHeader =
    "direction,alpha,sigma,threshold,slope,intercept,residual_rms";

/// Missing values are written as empty fields.
void write_records_csv(std::ostream& out, std::span<const RunRecord> records);
/// One block per heading with at least one positioning failure.
void write_pmd_csv(std::ostream& out, std::span<const RunRecord> records, std::span<const double> grid);
void write_summary_csv(std::ostream& out, std::span<const RunRecord> records, const FaultProfile& fault,
                       const std::string& constellation);

struct CalibrationRow {
  Direction direction = Direction::along;
  double alpha = 1.0;
  double sigma = 0.0;
  double threshold = 0.0;
  LinearFit fit;
};

void write_calibration_csv(std::ostream& out, std::span<const CalibrationRow> rows);

/// Reads `t,along_error_m` rows (header optional) and returns the error column.
std::vector<double> read_trace_csv(std::istream& in, const std::string& source = "<trace>");

/// Writes `content` through a temporary file and renames it into place.
void write_file_atomically(const std::filesystem::path& path, const std::string& content);

}  // namespace vbdiag
