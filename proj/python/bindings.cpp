#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hle/flow.hpp"
#include "hle/radial.hpp"
#include "hle/rellich.hpp"
#include "hle/variational.hpp"

namespace py = pybind11;
using namespace hle;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Radial Henon-Lane-Emden solutions on the critical hyperbola";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NonconvergenceError>(m, "NonconvergenceError",
                                                PyExc_RuntimeError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](int n, double a, double b, double p, double q) {
                 return SystemParams{n, a, b, p, q};
             }),
             py::arg("n"), py::arg("a"), py::arg("b"), py::arg("p"), py::arg("q"))
        .def_readwrite("n", &SystemParams::n)
        .def_readwrite("a", &SystemParams::a)
        .def_readwrite("b", &SystemParams::b)
        .def_readwrite("p", &SystemParams::p)
        .def_readwrite("q", &SystemParams::q);

    py::class_<ReducedParams>(m, "ReducedParams")
        .def_readonly("lambda1", &ReducedParams::lambda1)
        .def_readonly("lambda2", &ReducedParams::lambda2)
        .def_readonly("A", &ReducedParams::A)
        .def_readonly("Gamma", &ReducedParams::Gamma)
        .def_readonly("delta", &ReducedParams::delta)
        .def_readonly("p_conj", &ReducedParams::p_conj)
        .def_readonly("q_conj", &ReducedParams::q_conj)
        .def_readonly("p", &ReducedParams::p)
        .def_readonly("q", &ReducedParams::q)
        .def_readonly("n", &ReducedParams::n);

    py::class_<Regime>(m, "Regime")
        .def_property_readonly("tag",
                               [](const Regime& r) { return regime_tag_name(r.tag); })
        .def_readonly("reasons", &Regime::reasons);

    m.def("check_hyperbola", &check_hyperbola, py::arg("params"));
    m.def("derive_reduced", &derive_reduced, py::arg("params"));
    m.def("classify_regime", &classify_regime, py::arg("params"));
    m.def(
        "apriori_bounds",
        [](const ReducedParams& red) {
            const AprioriBounds b = apriori_bounds(red);
            return py::make_tuple(b.g_bound, b.f_bound);
        },
        py::arg("reduced"));
    m.def(
        "equilibria",
        [](const ReducedParams& red) {
            std::vector<std::pair<double, double>> out;
            for (const Equilibrium& e : equilibria(red)) out.emplace_back(e.x1, e.x2);
            return out;
        },
        py::arg("reduced"));

    py::class_<LineGrid>(m, "LineGrid")
        .def_static("make", &LineGrid::make, py::arg("half_length"), py::arg("spacing"))
        .def_property_readonly("half_length", &LineGrid::half_length)
        .def_property_readonly("spacing", &LineGrid::spacing)
        .def("__len__", &LineGrid::size)
        .def("nodes", &LineGrid::nodes);

    py::class_<TrajectoryPair>(m, "TrajectoryPair")
        .def_readonly("grid", &TrajectoryPair::grid)
        .def_readonly("g", &TrajectoryPair::g)
        .def_readonly("f", &TrajectoryPair::f)
        .def_readonly("red", &TrajectoryPair::red);

    py::class_<SolveOptions>(m, "SolveOptions")
        .def(py::init<>())
        .def_readwrite("tol", &SolveOptions::tol)
        .def_readwrite("max_iter", &SolveOptions::max_iter)
        .def_readwrite("seed", &SolveOptions::seed)
        .def_readwrite("multistarts", &SolveOptions::multistarts)
        .def_readwrite("polish", &SolveOptions::polish);

    py::class_<VariationalResult>(m, "VariationalResult")
        .def_readonly("pair", &VariationalResult::pair)
        .def_readonly("m", &VariationalResult::m)
        .def_readonly("mu", &VariationalResult::mu)
        .def_readonly("iterations", &VariationalResult::iterations)
        .def_readonly("converged", &VariationalResult::converged)
        .def_readonly("residual_sup1", &VariationalResult::residual_sup1)
        .def_readonly("residual_sup2", &VariationalResult::residual_sup2)
        .def_readonly("stationarity", &VariationalResult::stationarity);

    m.def("minimize_quotient", &minimize_quotient, py::arg("reduced"), py::arg("grid"),
          py::arg("options") = SolveOptions{});
    m.def(
        "system_residual_sups",
        [](const TrajectoryPair& t) {
            const SystemResidual r = system_residual(t);
            return py::make_tuple(r.sup1, r.sup2);
        },
        py::arg("pair"));
    m.def(
        "energy_max",
        [](const TrajectoryPair& t) { return interior_sup(t.grid, energy(t)); },
        py::arg("pair"));

    py::class_<DualityReport>(m, "DualityReport")
        .def_readonly("m", &DualityReport::m)
        .def_readonly("m_tilde", &DualityReport::m_tilde)
        .def_readonly("defect", &DualityReport::defect)
        .def_readonly("converged", &DualityReport::converged);
    m.def("duality_check", &duality_check, py::arg("params"), py::arg("grid"),
          py::arg("options") = SolveOptions{});

    py::class_<RadialSolution>(m, "RadialSolution")
        .def_readonly("radii", &RadialSolution::radii)
        .def_readonly("u", &RadialSolution::u)
        .def_readonly("v", &RadialSolution::v);
    m.def("to_radial", &to_radial, py::arg("pair"), py::arg("params"));
    m.def(
        "pde_residual_sups",
        [](const RadialSolution& sol) {
            const PdeResidual r = pde_residual(sol);
            return py::make_tuple(r.rel_sup1, r.rel_sup2);
        },
        py::arg("solution"));

    py::class_<DecayReport>(m, "DecayReport")
        .def_readonly("lim_u_inf", &DecayReport::lim_u_inf)
        .def_readonly("lim_u_0", &DecayReport::lim_u_0)
        .def_readonly("lim_v_inf", &DecayReport::lim_v_inf)
        .def_readonly("lim_v_0", &DecayReport::lim_v_0);
    m.def("decay_limits", &decay_limits, py::arg("pair"));

    m.def("gamma_appendix", &gamma_appendix, py::arg("n"), py::arg("theta"),
          py::arg("alpha"));
    m.def(
        "mu2",
        [](int n, double alpha) {
            const Mu2Result r = mu2(n, alpha);
            return py::make_tuple(r.value, r.k);
        },
        py::arg("n"), py::arg("alpha"));
    m.def("mu_theta", &mu_theta, py::arg("n"), py::arg("theta"), py::arg("alpha"));
    m.def(
        "theta_double_star",
        [](int n, double theta) -> py::object {
            const auto v = theta_double_star(n, theta);
            if (v) return py::float_(*v);
            return py::none();
        },
        py::arg("n"), py::arg("theta"));
}
