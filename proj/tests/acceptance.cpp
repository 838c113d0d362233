// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.
#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stats.hpp"
#include "vbdiag/constellation.hpp"
#include "vbdiag/monitors.hpp"
#include "vbdiag/report.hpp"
#include "vbdiag/sim.hpp"

using namespace vbdiag;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  fmt::print("{} [{}] {} -- {} ({:.1f} s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail, secs);
  std::fflush(stdout);
}

// Every campaign run here is also checked for a non-increasing P_md curve.
std::vector<std::vector<RunRecord>> campaigns;

std::vector<RunRecord> campaign(const ScenarioConfig& c) {
  campaigns.push_back(run_monte_carlo(c, 1));
  return campaigns.back();
}

ScenarioConfig heading_zero(const char* sky, double rate, std::size_t reps) {
  ScenarioConfig c;
  c.skyplot = sky;
  c.fault.rate = rate;
  c.reps = reps;
  c.headings = {0.0};
  return c;
}

double horizon(const ScenarioConfig& c) { return c.duration - c.fault.start; }

Outcome table_autocorrelation() {
  struct Row {
    const char* name;
    Gm1Params params;
    double reference_lag10, reference_lag1;  // tabulated ratios
  };
  // Elevation-dependent variances do not affect the ratios; 45 deg is used.
  const std::vector<Row> rows{{"iono", {std::pow(iono_sigma(45.0), 2), 360.0}, 0.9726, 0.9972},
                              {"tropo", {std::pow(tropo_sigma(45.0), 2), 1800.0}, 0.9945, 0.9994},
                              // Tabulated 0.9987 is inconsistent with tau = 3600 s.
                              {"orbit/clock", {0.3, 3600.0}, 0.9972, 0.9997},
                              {"user", {1.5, 100.0}, 0.9048, 0.9900}};
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (const auto& r : rows) {
    NormalSource normal(11);
    auto p = Gm1Process::stationary(r.params, 1.0, normal());
    std::vector<double> x(1'000'000);
    for (auto& v : x) v = p.step(normal());
    const double a1 = test::autocorrelation(x, 1), a10 = test::autocorrelation(x, 10);
    const double e1 = std::exp(-1.0 / r.params.tau), e10 = std::exp(-10.0 / r.params.tau);
    pass = pass && std::abs(a1 - e1) <= 0.003 && std::abs(a10 - e10) <= 0.003 &&
           std::abs(a1 - r.reference_lag1) <= 0.003 && std::abs(a10 - r.reference_lag10) <= 0.003;
    detail += fmt::format("{} lag1 {:.4f} lag10 {:.4f}; ", r.name, a1, a10);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  pass = pass && secs < 10.0;
  return {pass, detail + "orbit/clock lag10 compared against exp(-10/3600)"};
}

Outcome ewma_oracle() {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  std::vector<double> raw(10'000);
  for (auto& r : raw) r = n(rng);
  double worst = 0.0;
  for (double alpha : kBankAlphas) {
    double q = 0.0;
    for (std::size_t k = 0; k < raw.size(); ++k) {
      q = ewma_update(q, raw[k], alpha);
      worst = std::max(worst, std::abs(q - test::batch_ewma(raw, k, alpha, 0.0)));
    }
  }
  return {worst <= 1e-12, fmt::format("max deviation {:.2e}", worst)};
}

Outcome least_squares_identities() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> az(0.0, 360.0), el(5.5, 89.5);
  std::uniform_int_distribution<int> count(6, 18);
  double worst_id = 0.0, worst_bias = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Skyplot sky;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const auto c = (trial % 2 && i >= 4 && i % 2) ? Constellation::galileo : Constellation::gps;
      sky.satellites.push_back({{c, i + 1}, az(rng), el(rng)});
    }
    sky.faulty_id = sky.satellites[static_cast<std::size_t>(trial % n)].id;
    const auto g = geometry_matrix(sky);
    Eigen::VectorXd w(n);
    const ErrorModelConfig errors;
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (const auto& p : budget_params(errors, sky.satellites[static_cast<std::size_t>(i)].elevation_deg)) {
        v += p.variance_r0;
      }
      w(i) = 1.0 / v;
    }
    const auto s = solution_matrix(g, w);
    const auto p = static_cast<Eigen::Index>(sky.parameter_count());
    worst_id = std::max(worst_id, (s.full * g - Eigen::MatrixXd::Identity(p, p)).cwiseAbs().maxCoeff());
    const auto oracle = test::brute_force_solution(g, w);
    const auto j = static_cast<Eigen::Index>(sky.index_of(sky.faulty_id));
    Eigen::VectorXd bias = Eigen::VectorXd::Zero(n);
    bias(j) = 10.0;
    const TrackFrame frame{sky.satellites[static_cast<std::size_t>(j)].azimuth_deg};
    const Eigen::Vector3d expected = enu_to_track(frame) * oracle.topRows(3).col(j) * 10.0;
    worst_bias = std::max(worst_bias, (position_error(s, frame, bias) - expected).cwiseAbs().maxCoeff());
  }
  return {worst_id <= 1e-10 && worst_bias <= 1e-9,
          fmt::format("max |SG - I| {:.2e}, max bias deviation {:.2e}", worst_id, worst_bias)};
}

Outcome false_alarm_rate() {
  ScenarioConfig c;
  c.fault.rate = 0.0;
  c.p_fa = 0.0027;
  const Experiment exp(c);
  const auto& h = exp.heading(0);
  EpochSimulator sim(exp, h, 31, c.fault);
  std::array<std::size_t, 3> hits{};
  std::array<double, 3> thr{};
  for (std::size_t d = 0; d < 3; ++d) thr[d] = threshold(monitor_sigma(h.inputs[d], 1.0), c.p_fa);
  const std::size_t epochs = 1'000'000;
  for (std::size_t k = 0; k < epochs; ++k) {
    const auto& e = sim.step();
    for (std::size_t d = 0; d < 3; ++d) hits[d] += std::abs(e.raw[d]) > thr[d];
  }
  bool pass = std::abs(threshold_factor(c.p_fa) - 3.0) < 1e-3;
  std::string detail = fmt::format("k_T {:.4f};", threshold_factor(c.p_fa));
  for (std::size_t d = 0; d < 3; ++d) {
    const double rate = static_cast<double>(hits[d]) / static_cast<double>(epochs);
    pass = pass && std::abs(rate / 0.0027 - 1.0) <= 0.10;
    detail += fmt::format(" {} {:.5f}", to_string(static_cast<Direction>(d)), rate);
  }
  return {pass, detail};
}

Outcome pmd_at_zero() {
  const std::vector<double> grid{0.0, 100.0};
  bool pass = true;
  std::string detail;
  for (double rate : {0.1, 0.03, 0.01}) {
    const auto recs = campaign(heading_zero("dual54", rate, 1000));
    const auto curve = pmd_curve(recs, grid);
    if (!curve) {
      pass = false;
      detail += fmt::format("rate {}: no positioning failure; ", rate);
      continue;
    }
    const bool ok = rate > 0.02 ? curve->pmd[0] == 0.0 : curve->pmd[1] > 0.0;
    pass = pass && ok;
    detail += fmt::format("rate {}: P_md(0) {:.3f} P_md(+100) {:.3f}; ", rate, curve->pmd[0], curve->pmd[1]);
  }
  return {pass, detail};
}

Outcome constellation_benefit() {
  const auto dual = expected_times(campaign(heading_zero("dual54", 0.1, 1000)));
  const auto gps = expected_times(campaign(heading_zero("gps24", 0.1, 1000)));
  if (!dual[0].e_tdsf || !gps[0].e_tdsf) return {false, "E[T_dsf] undefined"};
  return {*dual[0].e_tdsf < *gps[0].e_tdsf,
          fmt::format("E[T_dsf] dual54 {:.1f} s, gps24 {:.1f} s", *dual[0].e_tdsf, *gps[0].e_tdsf)};
}

Outcome heading_sensitivity() {
  ScenarioConfig c;
  c.fault.rate = 0.1;
  c.reps = 500;
  c.use_map = false;
  const auto odo = expected_times(campaign(c), horizon(c));
  c.use_map = true;
  const auto map = expected_times(campaign(c), horizon(c));

  // Restricted means: a heading where the odometer alone misses runs counts
  // those runs at the horizon, a lower bound on the true mean.
  const double odo_ratio = *odo.back().e_td_restricted / *odo.front().e_td_restricted;
  double lo = INFINITY, hi = 0.0;
  for (const auto& e : map) {
    lo = std::min(lo, *e.e_td_restricted);
    hi = std::max(hi, *e.e_td_restricted);
  }
  std::size_t censored = 0;
  for (const auto& e : map) censored += e.censored;
  const bool pass = odo_ratio >= 1.2 && hi / lo <= 1.25 && censored == 0;
  return {pass, fmt::format("odometry E[T_d] 0 deg {:.0f} s, 75 deg {:.0f} s (ratio {:.2f}, {} censored); "
                            "odometry+map max/min {:.3f}",
                            *odo.front().e_td_restricted, *odo.back().e_td_restricted, odo_ratio,
                            odo.back().censored, hi / lo)};
}

std::string campaign_csv(const ScenarioConfig& c, std::size_t workers) {
  const Experiment exp(c);
  const auto recs = run_monte_carlo(exp, workers);
  std::ostringstream out;
  write_records_csv(out, recs);
  write_pmd_csv(out, recs, c.pmd_grid());
  write_summary_csv(out, recs, c.fault, exp.skyplot().constellation_label());
  return out.str();
}

Outcome monotonicity() {
  std::string detail;
  bool pass = true;

  std::vector<double> td;
  for (double rate : {0.03, 0.1, 1.0}) {
    const auto e = expected_times(campaign(heading_zero("dual54", rate, 200)));
    td.push_back(e[0].e_td.value_or(NAN));
    detail += fmt::format("E[T_d]({}) {:.1f} s; ", rate, td.back());
  }
  pass = pass && td[0] > td[1] && td[1] > td[2];

  std::size_t checked = 0;
  const auto grid = ScenarioConfig{}.pmd_grid();
  for (const auto& recs : campaigns) {
    if (const auto curve = pmd_curve(recs, grid)) {
      ++checked;
      for (std::size_t i = 1; i < curve->pmd.size(); ++i) pass = pass && curve->pmd[i] <= curve->pmd[i - 1];
    }
  }
  detail += fmt::format("{} P_md curves non-increasing; ", checked);

  ScenarioConfig c;
  c.fault.rate = 0.1;
  c.reps = 50;
  const auto ref = campaign_csv(c, 1);
  const bool same = ref == campaign_csv(c, 2) && ref == campaign_csv(c, 4);
  pass = pass && same;
  detail += same ? "CSV bytes identical for 1/2/4 workers" : "CSV bytes differ across worker counts";
  return {pass, detail};
}

}  // namespace

int main() {
  criterion(1, "error-source autocorrelation", table_autocorrelation);
  criterion(2, "EWMA batch oracle", ewma_oracle);
  criterion(3, "least-squares identities", least_squares_identities);
  criterion(4, "false-alarm calibration", false_alarm_rate);
  criterion(5, "P_md at T_dsf 0 / +100 s", pmd_at_zero);
  criterion(6, "constellation benefit", constellation_benefit);
  criterion(7, "heading sensitivity", heading_sensitivity);
  criterion(8, "monotonicity and determinism", monotonicity);
  fmt::print("{} of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
