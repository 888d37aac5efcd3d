#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lifeopt/closedform.hpp"
#include "lifeopt/commands.hpp"
#include "lifeopt/config.hpp"
#include "lifeopt/hjb.hpp"
#include "lifeopt/montecarlo.hpp"

namespace py = pybind11;
using namespace lifeopt;

namespace {

// Runs a subcommand and returns (exit code, log text).
py::tuple run(const std::string& command, const RunConfig& config) {
    std::ostringstream log, err;
    const int code = run_command(command, config, log, err);
    return py::make_tuple(code, log.str() + err.str());
}

UtilityEstimate utility(const ModelParams& p, double theta, std::size_t n_paths, double dt, std::uint64_t seed,
                        const std::string& dynamics, unsigned workers) {
    SimConfig cfg;
    cfg.n_paths = n_paths;
    cfg.grid = TimeGrid::with_step(p.horizon, dt);
    cfg.seed = seed;
    cfg.dynamics = parse_dynamics(dynamics);
    cfg.workers = workers;
    return estimate_utility(cfg, p, feedback_controls(solve_hjb(p, theta, cfg.grid.n_steps), p));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Optimal consumption, investment and life insurance with exponential utility";

    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<PiecewiseConstant>(m, "PiecewiseConstant")
        .def(py::init<double>(), py::arg("value"))
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("breaks"), py::arg("values"))
        .def("__call__", &PiecewiseConstant::operator())
        .def("integral", &PiecewiseConstant::integral, py::arg("a"), py::arg("b"))
        .def_property_readonly("breaks", &PiecewiseConstant::breaks)
        .def_property_readonly("values", &PiecewiseConstant::values);
    py::implicitly_convertible<double, PiecewiseConstant>();

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("r", &ModelParams::r)
        .def_readwrite("mu", &ModelParams::mu)
        .def_readwrite("sigma", &ModelParams::sigma)
        .def_readwrite("rho", &ModelParams::rho)
        .def_readwrite("alpha", &ModelParams::alpha)
        .def_readwrite("delta", &ModelParams::delta)
        .def_readwrite("horizon", &ModelParams::horizon)
        .def_readwrite("initial_wealth", &ModelParams::initial_wealth)
        .def_readwrite("mortality", &ModelParams::mortality)
        .def_readwrite("income", &ModelParams::income);

    py::class_<DerivedConstants>(m, "DerivedConstants")
        .def_readonly("xi", &DerivedConstants::xi)
        .def_readonly("psi", &DerivedConstants::psi)
        .def_readonly("gamma", &DerivedConstants::gamma);

    m.def("baseline_params", &baseline_params, py::arg("initial_wealth") = 1.0);
    m.def("validate", &validate);
    m.def("derive", &derive);

    m.def("g1", &g1, py::arg("t"), py::arg("params"));
    m.def("g2", &g2, py::arg("t"), py::arg("params"));
    m.def("zeta_of_theta", &zeta_of_theta, py::arg("theta"), py::arg("params"));
    m.def("value_at_theta", &value_at_theta, py::arg("theta"), py::arg("params"));
    m.def("optimal_portfolio", &optimal_portfolio, py::arg("t"), py::arg("params"));
    m.def(
        "dual_objective",
        [](double psi, double theta, double zeta, const ModelParams& p, std::size_t n) {
            return dual_objective({PiecewiseConstant(psi), theta, zeta}, p, n);
        },
        py::arg("psi"), py::arg("theta"), py::arg("zeta"), py::arg("params"), py::arg("n_intervals") = 10000);

    py::class_<ClosedFormSolution>(m, "ClosedFormSolution")
        .def_readonly("zeta_star", &ClosedFormSolution::zeta_star)
        .def_readonly("theta_hat", &ClosedFormSolution::theta_hat)
        .def_readonly("value", &ClosedFormSolution::value);
    m.def("solve", [](const ModelParams& p) { return solve(p); }, py::arg("params"));

    py::class_<ValueSurface>(m, "ValueSurface")
        .def_readonly("theta", &ValueSurface::theta)
        .def_readonly("A", &ValueSurface::A)
        .def_readonly("B", &ValueSurface::B)
        .def("A_at", &ValueSurface::A_at)
        .def("B_at", &ValueSurface::B_at)
        .def("value", [](const ValueSurface& s, double t, double x) { return value(t, x, s); }, py::arg("t"),
             py::arg("x"));
    m.def("solve_hjb", &solve_hjb, py::arg("params"), py::arg("theta"), py::arg("grid_steps") = 10000);
    m.def("indifference_price", &indifference_price, py::arg("t"), py::arg("theta"), py::arg("params"),
          py::arg("grid_steps") = 10000);

    py::class_<EstimatorResult>(m, "EstimatorResult")
        .def_readonly("mean", &EstimatorResult::mean)
        .def_readonly("std_error", &EstimatorResult::std_error)
        .def_readonly("n_paths", &EstimatorResult::n_paths)
        .def_readonly("seed", &EstimatorResult::seed);
    py::class_<UtilityEstimate>(m, "UtilityEstimate")
        .def_readonly("result", &UtilityEstimate::result)
        .def_readonly("negative_consumption_fraction", &UtilityEstimate::negative_consumption_fraction);
    m.def("estimate_utility", &utility, py::arg("params"), py::arg("theta"), py::arg("n_paths"),
          py::arg("dt") = 1e-3, py::arg("seed") = 42, py::arg("dynamics") = "hjb-generator", py::arg("workers") = 0,
          py::call_guard<py::gil_scoped_release>());

    py::class_<RunConfig>(m, "RunConfig")
        .def_readwrite("model", &RunConfig::model)
        .def_readwrite("output_dir", &RunConfig::output_dir);
    m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "<memory>");
    m.def("load_config", &load_config, py::arg("path"));
    m.def("run_command", &run, py::arg("command"), py::arg("config"));
}
