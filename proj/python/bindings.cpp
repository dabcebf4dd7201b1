#include "degen_control/bessel.hpp"
#include "degen_control/bounds.hpp"
#include "degen_control/pipeline.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace degen_control;

PYBIND11_MODULE(_degen_control, m)
{
    m.doc() = "Boundary null control of a degenerate singular heat equation";

    py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<BesselError>(m, "BesselError", PyExc_ArithmeticError);
    py::register_exception<FamilyError>(m, "FamilyError", PyExc_RuntimeError);

    py::class_<ProblemParams>(m, "ProblemParams")
        .def_readonly("alpha", &ProblemParams::alpha)
        .def_readonly("beta", &ProblemParams::beta)
        .def_readonly("mu", &ProblemParams::mu)
        .def_readonly("T", &ProblemParams::horizon_T)
        .def_readonly("kappa", &ProblemParams::kappa)
        .def_readonly("nu", &ProblemParams::nu)
        .def_readonly("gamma", &ProblemParams::gamma)
        .def_readonly("mu_crit", &ProblemParams::mu_crit);

    m.def("derive", &derive, py::arg("alpha"), py::arg("beta"), py::arg("mu"), py::arg("T"));

    m.def("eval_J", py::vectorize(static_cast<double (*)(double, double)>(&eval_J)), py::arg("nu"), py::arg("x"));
    m.def("eval_J_prime", py::vectorize(static_cast<double (*)(double, double)>(&eval_J_prime)), py::arg("nu"),
          py::arg("x"));
    m.def("bessel_zeros", [](double nu, int K) { return zeros(nu, K).zeros; }, py::arg("nu"), py::arg("K"));

    py::class_<Mode>(m, "Mode")
        .def_readonly("index", &Mode::index)
        .def_readonly("zero", &Mode::zero)
        .def_readonly("eigenvalue", &Mode::lambda)
        .def_readonly("gen_deriv", &Mode::gen_deriv);

    m.def("compute_modes", py::overload_cast<const ProblemParams&, int>(&compute_modes), py::arg("params"),
          py::arg("K"));
    m.def("eigenfunction",
          [](const ProblemParams& p, const Mode& md, double x) { return eigenfunction_eval(p, md, x); },
          py::arg("params"), py::arg("mode"), py::arg("x"));

    m.def("upper_bound", &upper_bound, py::arg("params"), py::arg("delta"), py::arg("c_cal") = 1.0);
    m.def("lower_bound", &lower_bound, py::arg("params"));

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_readwrite("alpha", &RunConfig::alpha)
        .def_readwrite("beta", &RunConfig::beta)
        .def_readwrite("mu", &RunConfig::mu)
        .def_readwrite("T", &RunConfig::T)
        .def_readwrite("modes", &RunConfig::modes)
        .def_readwrite("monitor_modes", &RunConfig::monitor_modes)
        .def_readwrite("delta", &RunConfig::delta_param)
        .def_readwrite("samples", &RunConfig::time_samples)
        .def_readwrite("u0", &RunConfig::initial_state)
        .def_readwrite("terminal_tol", &RunConfig::terminal_tol)
        .def_readwrite("gram_tol", &RunConfig::gram_tol)
        .def_readwrite("precision", &RunConfig::precision)
        .def_readwrite("threads", &RunConfig::threads)
        .def("set", &apply_setting, py::arg("key"), py::arg("value"));

    m.def("parse_config", [](const std::string& text) { return parse_config(text); }, py::arg("text"));

    // Returns (exit_code, report_json, control_samples).
    m.def(
        "run",
        [](const RunConfig& cfg) {
            RunResult r;
            {
                py::gil_scoped_release unlock;
                r = run_pipeline(cfg);
            }
            return py::make_tuple(r.exit_code, r.report_json, r.control.samples);
        },
        py::arg("config"));

    m.def(
        "verify",
        [](const RunConfig& cfg) {
            VerifyResult v;
            {
                py::gil_scoped_release unlock;
                v = run_verify(cfg);
            }
            return py::make_tuple(v.exit_code, v.report_json);
        },
        py::arg("config"));
}
