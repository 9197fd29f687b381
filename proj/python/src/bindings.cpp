#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "gsbp/cli.hpp"
#include "gsbp/experiments.hpp"
#include "gsbp/operators.hpp"

namespace py = pybind11;
using namespace gsbp;

namespace {

std::string repr_config(const AdvDiffConfig& c) {
  std::ostringstream s;
  s << "AdvDiffConfig(a=" << c.a << ", c=" << c.c << ", theta_adv=" << c.theta_adv
    << ", theta_diff=" << c.theta_diff << ", degree=" << c.degree
    << ", num_cells=" << c.num_cells << ")";
  return s.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Global upwind SBP operators and IMEX schemes";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::enum_<Topology>(m, "Topology")
      .value("periodic", Topology::periodic)
      .value("bounded", Topology::bounded);
  py::enum_<SolutionKind>(m, "SolutionKind")
      .value("decay", SolutionKind::decay)
      .value("growth", SolutionKind::growth);
  py::enum_<ScanStatus>(m, "ScanStatus")
      .value("bounded", ScanStatus::bounded)
      .value("unbounded", ScanStatus::unbounded)
      .value("below_bracket", ScanStatus::below_bracket);
  py::enum_<Subcommand>(m, "Subcommand")
      .value("verify", Subcommand::verify)
      .value("scan", Subcommand::scan)
      .value("converge", Subcommand::converge)
      .value("solve", Subcommand::solve)
      .value("burgers", Subcommand::burgers);

  // Discretization building blocks

  py::class_<ReferenceElement>(m, "ReferenceElement")
      .def_property_readonly("degree", &ReferenceElement::degree)
      .def_property_readonly("nodes", &ReferenceElement::nodes)
      .def_property_readonly("weights", &ReferenceElement::weights)
      .def_property_readonly("diff", &ReferenceElement::diff)
      .def_property_readonly("left", &ReferenceElement::left)
      .def_property_readonly("right", &ReferenceElement::right)
      .def("lagrange_at", &ReferenceElement::lagrange_at, py::arg("x"));
  m.def("build_lgl", &build_lgl, py::arg("degree"));

  py::class_<Mesh1D>(m, "Mesh1D")
      .def(py::init<double, double, std::vector<double>>(), py::arg("x_a"), py::arg("x_b"),
           py::arg("widths"))
      .def_property_readonly("x_a", &Mesh1D::x_a)
      .def_property_readonly("x_b", &Mesh1D::x_b)
      .def_property_readonly("num_cells", &Mesh1D::num_cells)
      .def_property_readonly("widths", &Mesh1D::widths);
  m.def("uniform_mesh", &uniform_mesh, py::arg("x_a"), py::arg("x_b"), py::arg("num_cells"));

  py::class_<GlobalOperatorSet>(m, "OperatorSet")
      .def(py::init<const ReferenceElement&, const Mesh1D&, double, Topology>(),
           py::arg("element"), py::arg("mesh"), py::arg("theta"),
           py::arg("topology") = Topology::periodic)
      .def_property_readonly("theta", &GlobalOperatorSet::theta)
      .def_property_readonly("topology", &GlobalOperatorSet::topology)
      .def_property_readonly("size", &GlobalOperatorSet::size)
      .def_property_readonly("nodes", &GlobalOperatorSet::nodes)
      .def_property_readonly("norm", &GlobalOperatorSet::norm_diagonal)
      .def_property_readonly("d_minus", &GlobalOperatorSet::d_minus)
      .def_property_readonly("d_plus", &GlobalOperatorSet::d_plus)
      .def_property_readonly("boundary", &GlobalOperatorSet::boundary_operator)
      .def_property_readonly("dissipation", &GlobalOperatorSet::dissipation)
      .def("d2", [](const GlobalOperatorSet& ops) -> SparseMatrix {
        return ops.d_minus() * ops.d_plus();
      })
      .def("energy", &GlobalOperatorSet::energy, py::arg("u"));

  py::class_<CertificationReport>(m, "CertificationReport")
      .def_readonly("degree", &CertificationReport::degree)
      .def_readonly("num_cells", &CertificationReport::num_cells)
      .def_readonly("theta", &CertificationReport::theta)
      .def_readonly("topology", &CertificationReport::topology)
      .def_readonly("accuracy_residual", &CertificationReport::accuracy_residual)
      .def_readonly("norm_min", &CertificationReport::norm_min)
      .def_readonly("boundary_residual", &CertificationReport::boundary_residual)
      .def_readonly("sbp_residual", &CertificationReport::sbp_residual)
      .def_readonly("dissipation_max_eigenvalue", &CertificationReport::dissipation_max_eigenvalue)
      .def_readonly("second_derivative_residual", &CertificationReport::second_derivative_residual)
      .def("all_passed", &CertificationReport::all_passed)
      .def("to_text", &CertificationReport::to_text);
  m.def("verify_axioms", &verify_axioms, py::arg("operators"), py::arg("tolerance") = 1e-10);

  py::class_<ImexTableau>(m, "ImexTableau")
      .def_readonly("name", &ImexTableau::name)
      .def_readonly("order", &ImexTableau::order)
      .def_readonly("a_explicit", &ImexTableau::a_explicit)
      .def_readonly("a_implicit", &ImexTableau::a_implicit)
      .def_readonly("b_explicit", &ImexTableau::b_explicit)
      .def_readonly("b_implicit", &ImexTableau::b_implicit)
      .def_readonly("c", &ImexTableau::c);
  m.def("tableau", &tableau_by_order, py::arg("order"));

  // Experiments

  py::class_<AdvDiffConfig>(m, "AdvDiffConfig")
      .def(py::init<>())
      .def_readwrite("a", &AdvDiffConfig::a)
      .def_readwrite("c", &AdvDiffConfig::c)
      .def_readwrite("theta_adv", &AdvDiffConfig::theta_adv)
      .def_readwrite("theta_diff", &AdvDiffConfig::theta_diff)
      .def_readwrite("degree", &AdvDiffConfig::degree)
      .def_readwrite("num_cells", &AdvDiffConfig::num_cells)
      .def_property_readonly("compatible", &AdvDiffConfig::compatible)
      .def("__repr__", &repr_config);

  py::class_<StabilityConfig>(m, "StabilityConfig")
      .def(py::init<>())
      .def(py::init([](const AdvDiffConfig& problem, int order, double horizon) {
             return StabilityConfig{problem, order, horizon};
           }),
           py::arg("problem"), py::arg("order") = 1, py::arg("horizon") = 100.0)
      .def_readwrite("problem", &StabilityConfig::problem)
      .def_readwrite("order", &StabilityConfig::order)
      .def_readwrite("horizon", &StabilityConfig::horizon)
      .def_property_readonly("tau_scale", &StabilityConfig::tau_scale);

  py::class_<StabilityScanResult>(m, "StabilityScanResult")
      .def_readonly("config", &StabilityScanResult::config)
      .def_readonly("status", &StabilityScanResult::status)
      .def_readonly("dt_max", &StabilityScanResult::dt_max)
      .def_readonly("tau", &StabilityScanResult::tau)
      .def_readonly("non_monotone", &StabilityScanResult::non_monotone)
      .def_property_readonly("probes", [](const StabilityScanResult& r) { return r.probes.size(); })
      .def("tau_text", &StabilityScanResult::tau_text);

  m.def("is_stable", &is_stable, py::arg("config"), py::arg("dt"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "max_stable_dt",
      [](const StabilityConfig& config, double tau_cap, double tau_min, double resolution) {
        ScanBracket bracket;
        bracket.tau_cap = tau_cap;
        bracket.tau_min = tau_min;
        return max_stable_dt(config, bracket, resolution);
      },
      py::arg("config"), py::arg("tau_cap") = 1e4, py::arg("tau_min") = 1e-3,
      py::arg("resolution") = 1e-3, py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_scans",
      [](const std::vector<StabilityConfig>& configs, double tau_cap, double resolution,
         int workers) {
        ScanBracket bracket;
        bracket.tau_cap = tau_cap;
        return run_scans(configs, bracket, resolution, workers);
      },
      py::arg("configs"), py::arg("tau_cap") = 1e4, py::arg("resolution") = 1e-3,
      py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("stability_csv", &stability_csv, py::arg("results"));
  m.def("theorem_tau_floor", &theorem_tau_floor, py::arg("order"));

  py::class_<ConvergenceConfig>(m, "ConvergenceConfig")
      .def(py::init<>())
      .def_readwrite("problem", &ConvergenceConfig::problem)
      .def_readwrite("solution", &ConvergenceConfig::solution)
      .def_readwrite("order", &ConvergenceConfig::order)
      .def_readwrite("mu", &ConvergenceConfig::mu)
      .def_readwrite("horizon", &ConvergenceConfig::horizon);
  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("num_cells", &ConvergenceRow::num_cells)
      .def_readonly("dt", &ConvergenceRow::dt)
      .def_readonly("stable", &ConvergenceRow::stable)
      .def_readonly("l2_error", &ConvergenceRow::l2_error)
      .def_readonly("eoc", &ConvergenceRow::eoc);
  m.def("run_convergence", &run_convergence, py::arg("config"), py::arg("cells"),
        py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("convergence_csv", &convergence_csv, py::arg("config"), py::arg("rows"));

  py::class_<BurgersConfig>(m, "BurgersConfig")
      .def(py::init<>())
      .def_readwrite("theta_adv", &BurgersConfig::theta_adv)
      .def_readwrite("theta_diff", &BurgersConfig::theta_diff)
      .def_readwrite("degree", &BurgersConfig::degree)
      .def_readwrite("num_cells", &BurgersConfig::num_cells)
      .def_readwrite("c", &BurgersConfig::c)
      .def_readwrite("dt", &BurgersConfig::dt)
      .def_readwrite("horizon", &BurgersConfig::horizon)
      .def_readwrite("order", &BurgersConfig::order)
      .def_readwrite("snapshot_times", &BurgersConfig::snapshot_times)
      .def_readwrite("blowup_factor", &BurgersConfig::blowup_factor);
  py::class_<BurgersResult>(m, "BurgersResult")
      .def_readonly("completed", &BurgersResult::completed)
      .def_readonly("blowup_time", &BurgersResult::blowup_time)
      .def_readonly("final_time", &BurgersResult::final_time)
      .def_property_readonly("times", [](const BurgersResult& r) { return r.trace.time; })
      .def_property_readonly("energy", [](const BurgersResult& r) { return r.trace.energy; })
      .def_property_readonly("snapshots", [](const BurgersResult& r) {
        py::list out;
        for (const auto& s : r.snapshots) out.append(py::make_tuple(s.time, s.x, s.u));
        return out;
      });
  m.def("run_burgers_demo", &run_burgers_demo, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  // Configuration and dispatch, as used by the command-line tool

  py::class_<RunConfig>(m, "RunConfig")
      .def_readwrite("command", &RunConfig::command)
      .def_readwrite("degrees", &RunConfig::degrees)
      .def_readwrite("cells", &RunConfig::cells)
      .def_readwrite("thetas", &RunConfig::thetas)
      .def_readwrite("pairs", &RunConfig::pairs)
      .def_readwrite("orders", &RunConfig::orders)
      .def_readwrite("a", &RunConfig::a)
      .def_readwrite("c", &RunConfig::c)
      .def_readwrite("horizon", &RunConfig::horizon)
      .def_readwrite("dt", &RunConfig::dt)
      .def_readwrite("mu", &RunConfig::mu)
      .def_readwrite("problem", &RunConfig::problem)
      .def_readwrite("tau_cap", &RunConfig::tau_cap)
      .def_readwrite("resolution", &RunConfig::resolution)
      .def_readwrite("times", &RunConfig::times)
      .def_readwrite("out", &RunConfig::out)
      .def_readwrite("workers", &RunConfig::workers)
      .def_readwrite("seed", &RunConfig::seed)
      .def("__eq__", [](const RunConfig& a, const RunConfig& b) { return a == b; });

  m.def(
      "parse_config",
      [](Subcommand command, std::optional<std::string> path, const py::dict& overrides) {
        // Applied in insertion order; values may be any object with a str() form.
        std::vector<std::pair<std::string, std::string>> list;
        for (const auto& [key, value] : overrides) {
          list.emplace_back(py::str(key), py::str(value));
        }
        return parse_config(command, path, list);
      },
      py::arg("command"), py::arg("path") = py::none(), py::arg("overrides") = py::dict());
  m.def("parse_config_text", &parse_config_text, py::arg("text"),
        py::arg("command") = py::none());
  m.def("serialize", &serialize, py::arg("config"));
  m.def(
      "dispatch",
      [](const RunConfig& config) {
        std::ostringstream log;
        int code;
        {
          py::gil_scoped_release release;
          code = dispatch(config, log);
        }
        return py::make_tuple(code, log.str());
      },
      py::arg("config"), "Runs the experiment; returns (exit_code, log).");
}
