#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vbdiag/constellation.hpp"
#include "vbdiag/errors.hpp"
#include "vbdiag/faults.hpp"
#include "vbdiag/gm_noise.hpp"
#include "vbdiag/monitors.hpp"
#include "vbdiag/scenario.hpp"
#include "vbdiag/sim.hpp"

namespace py = pybind11;
using namespace vbdiag;

namespace {

py::dict record_to_dict(const RunRecord& r) {
  py::dict d;
  d["run"] = r.run_index;
  d["heading_deg"] = r.heading_deg;
  d["t_fault"] = r.t_fault;
  d["t_failure"] = r.t_failure;
  d["t_detect"] = r.t_detect;
  d["direction"] = r.direction ? py::object(py::str(std::string(to_string(*r.direction)))) : py::none();
  d["alpha"] = r.alpha;
  d["t_d"] = r.t_d();
  d["t_dsf"] = r.t_dsf();
  d["warmup_flag"] = r.warmup_flag;
  d["hazard"] = std::string(to_string(r.hazard));
  d["false_alarms"] = r.false_alarms;
  return d;
}

ScenarioConfig scenario_from_text(const std::string& text, const std::string& base_dir) {
  std::istringstream in(text);
  return parse_scenario(in, "<scenario>", base_dir);
}

// Scenario defaults overridden by the common keyword arguments.
ScenarioConfig make_config(const std::string& text, std::optional<std::string> skyplot,
                           std::optional<double> rate, std::optional<std::size_t> reps,
                           std::optional<std::vector<double>> headings, std::optional<std::uint64_t> seed,
                           std::optional<bool> use_map) {
  auto c = scenario_from_text(text, "");
  if (skyplot) c.skyplot = *skyplot;
  if (rate) c.fault.rate = *rate;
  if (reps) c.reps = *reps;
  if (headings) c.headings = *headings;
  if (seed) c.master_seed = *seed;
  if (use_map) c.use_map = *use_map;
  validate(c);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Virtual-balise GNSS fault diagnostic simulator";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<CalibrationError>(m, "CalibrationError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<Gm1Params>(m, "Gm1Params")
      .def(py::init([](double variance_r0, double tau) { return Gm1Params{variance_r0, tau}; }),
           py::arg("variance_r0"), py::arg("tau"))
      .def_readwrite("variance_r0", &Gm1Params::variance_r0)
      .def_readwrite("tau", &Gm1Params::tau);

  m.def("gm1_discrete_coeffs",
        [](const Gm1Params& p, double dt) {
          auto c = gm1_discrete_coeffs(p, dt);
          return py::make_tuple(c.phi, c.process_noise_var);
        },
        py::arg("params"), py::arg("dt") = 1.0, "(phi, process_noise_var)");

  py::class_<Gm1Process>(m, "Gm1Process")
      .def(py::init<const Gm1Params&, double, double>(), py::arg("params"), py::arg("dt") = 1.0,
           py::arg("initial_state") = 0.0)
      .def("step", &Gm1Process::step, py::arg("draw"))
      .def_property("state", &Gm1Process::state, &Gm1Process::set_state);

  m.def("tropo_sigma", &tropo_sigma, py::arg("elevation_deg"), py::arg("zenith_sigma") = 0.12);
  m.def("iono_sigma", &iono_sigma, py::arg("elevation_deg"), py::arg("vertical_sigma") = 0.4,
        py::arg("earth_radius") = 6378.0e3, py::arg("shell_height") = 350.0e3);

  m.def("skyplot",
        [](const std::string& name_or_path, double mask_deg) {
          auto sky = resolve_skyplot(name_or_path, FaultProfile{}.satellite, mask_deg);
          py::list out;
          for (const auto& s : sky.satellites) {
            out.append(py::make_tuple(s.id.to_string(), s.azimuth_deg, s.elevation_deg));
          }
          return out;
        },
        py::arg("name_or_path") = "dual54", py::arg("mask_deg") = kDefaultMaskDeg,
        "[(id, azimuth_deg, elevation_deg), ...]");
  m.def("line_of_sight", &line_of_sight, py::arg("azimuth_deg"), py::arg("elevation_deg"));
  m.def("solution_matrix",
        [](const Eigen::MatrixXd& g, const Eigen::VectorXd& w) { return solution_matrix(g, w).full; },
        py::arg("geometry"), py::arg("weights"), "(G'WG)^-1 G'W");

  m.def("ewma_update", &ewma_update, py::arg("prev"), py::arg("raw"), py::arg("alpha"));
  m.def("threshold_factor", &threshold_factor, py::arg("p_fa"));
  m.def("fault_bias",
        [](double t, double start, double rate) {
          FaultProfile f;
          f.start = start;
          f.rate = rate;
          return fault_bias(f, t);
        },
        py::arg("t"), py::arg("start") = 5000.0, py::arg("rate") = 0.1);
  m.def("classify_hazard",
        [](const std::vector<double>& trace) { return std::string(to_string(classify_hazard(trace))); },
        py::arg("along_error_trace"));

  m.def("validate_scenario",
        [](const std::string& text) { return serialize_scenario(scenario_from_text(text, "")); },
        py::arg("text"), "Parses and validates scenario text; returns its normalized form.");

  m.def("run_monte_carlo",
        [](const std::string& text, std::optional<std::string> skyplot, std::optional<double> rate,
           std::optional<std::size_t> reps, std::optional<std::vector<double>> headings,
           std::optional<std::uint64_t> seed, std::optional<bool> use_map, std::size_t workers) {
          const auto c = make_config(text, skyplot, rate, reps, headings, seed, use_map);
          std::vector<RunRecord> records;
          {
            py::gil_scoped_release release;
            records = run_monte_carlo(c, workers);
          }
          py::list out;
          for (const auto& r : records) out.append(record_to_dict(r));
          return out;
        },
        py::arg("scenario") = "", py::kw_only(), py::arg("skyplot") = py::none(),
        py::arg("rate") = py::none(), py::arg("reps") = py::none(), py::arg("headings") = py::none(),
        py::arg("seed") = py::none(), py::arg("use_map") = py::none(), py::arg("workers") = 1,
        "Runs a campaign; returns one dict per run.");

  m.def("campaign_summary",
        [](const std::string& text, std::optional<std::string> skyplot, std::optional<double> rate,
           std::optional<std::size_t> reps, std::optional<std::vector<double>> headings,
           std::optional<std::uint64_t> seed, std::optional<bool> use_map, std::size_t workers) {
          const auto c = make_config(text, skyplot, rate, reps, headings, seed, use_map);
          std::vector<RunRecord> records;
          {
            py::gil_scoped_release release;
            records = run_monte_carlo(c, workers);
          }
          py::list out;
          for (const auto& e : expected_times(records, c.duration - c.fault.start)) {
            py::dict d;
            d["heading_deg"] = e.heading_deg;
            d["e_td"] = e.e_td;
            d["e_tdsf"] = e.e_tdsf;
            d["runs"] = e.runs;
            d["censored"] = e.censored;
            out.append(d);
          }
          const auto grid = c.pmd_grid();
          py::object pmd = py::none();
          if (auto curve = pmd_curve(records, grid)) pmd = py::make_tuple(curve->grid, curve->pmd);
          return py::make_tuple(out, pmd);
        },
        py::arg("scenario") = "", py::kw_only(), py::arg("skyplot") = py::none(),
        py::arg("rate") = py::none(), py::arg("reps") = py::none(), py::arg("headings") = py::none(),
        py::arg("seed") = py::none(), py::arg("use_map") = py::none(), py::arg("workers") = 1,
        "Runs a campaign; returns (expected times per heading, (grid, pmd) or None).");
}
