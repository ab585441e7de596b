#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqed/collective.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"
#include "cqed/perturbative.hpp"
#include "cqed/spectrum.hpp"
#include "cqed/sweep.hpp"

namespace py = pybind11;
using namespace cqed;

namespace {

py::object cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return py::float_(*d);
    if (const auto* i = std::get_if<long long>(&c)) return py::int_(*i);
    return py::str(std::get<std::string>(c));
}

py::tuple result_tuple(const SweepResult& r) {
    py::list rows;
    for (const Row& row : r.table.rows()) {
        py::list out;
        for (const Cell& c : row) out.append(cell(c));
        rows.append(out);
    }
    return py::make_tuple(r.name, r.table.columns(), rows, r.metadata.dump());
}

py::dict observable_dict(const SteadyPoint& sp) {
    py::dict d;
    d["mean_n"] = sp.obs.mean_n;
    d["alpha"] = sp.obs.alpha;
    d["i_cav"] = sp.obs.i_cav;
    d["i_at_total"] = sp.obs.i_at_total;
    d["pi_e"] = sp.obs.pi_e_per_atom;
    d["g2_zero"] = sp.obs.g2_zero ? py::object(py::float_(*sp.obs.g2_zero)) : py::object(py::none());
    d["n_max"] = sp.space.n_max();
    d["residual"] = sp.residual;
    d["escalations"] = sp.escalations;
    return d;
}

}  // namespace

PYBIND11_MODULE(_cqed, m) {
    m.doc() = "C++ core of the cqed package";

    // Most recently registered translators are tried first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](std::vector<double> positions, double g0, double omega, double theta, double delta,
                         double delta_c, double kappa, double gamma) {
                 SystemParams p;
                 p.positions = std::move(positions);
                 p.g0 = g0;
                 p.omega = omega;
                 p.theta = theta;
                 p.delta = delta;
                 p.delta_c = delta_c;
                 p.kappa = kappa;
                 p.gamma = gamma;
                 p.validate();
                 return p;
             }),
             py::arg("positions") = std::vector<double>{0.0}, py::arg("g0") = 1.0, py::arg("omega") = 1.0,
             py::arg("theta") = std::numbers::pi / 2, py::arg("delta") = 0.0, py::arg("delta_c") = 0.0,
             py::arg("kappa") = 0.0, py::arg("gamma") = 1.0)
        .def_readwrite("positions", &SystemParams::positions)
        .def_readwrite("g0", &SystemParams::g0)
        .def_readwrite("omega", &SystemParams::omega)
        .def_readwrite("theta", &SystemParams::theta)
        .def_readwrite("delta", &SystemParams::delta)
        .def_readwrite("delta_c", &SystemParams::delta_c)
        .def_readwrite("kappa", &SystemParams::kappa)
        .def_readwrite("gamma", &SystemParams::gamma)
        .def("__repr__", [](const SystemParams& p) {
            return "SystemParams(n_atoms=" + std::to_string(p.n_atoms()) + ", g0=" + std::to_string(p.g0) +
                   ", omega=" + std::to_string(p.omega) + ", kappa=" + std::to_string(p.kappa) + ")";
        });

    m.def(
        "steady_state",
        [](const SystemParams& p, std::optional<int> n_max) { return observable_dict(solve_steady_point(p, n_max)); },
        py::arg("params"), py::arg("n_max") = py::none(), "Steady-state observables of the full master equation.");
    m.def("free_space_fluorescence", &free_space_fluorescence, py::arg("omega"), py::arg("delta"),
          py::arg("gamma") = 1.0);
    m.def(
        "small_kappa_rates",
        [](const SystemParams& p) {
            const SmallKappaRates r = small_kappa_rates(p);
            py::dict d;
            d["i_at"] = r.i_at;
            d["i_cav"] = r.i_cav;
            d["c1"] = r.c1;
            d["regime_valid"] = r.regime_valid;
            return d;
        },
        py::arg("params"));
    m.def(
        "perturbative_trace_distance",
        [](const SystemParams& p, double t, int order, int n_max) {
            const SpaceDescriptor target(1, n_max);
            const PerturbativeState ps = perturbative_state(p, t, order);
            const DensityMatrix exact =
                evolve(DensityMatrix::pure(target, coherent_ket(target, ps.beta)), build_liouvillian(p, target), t);
            return trace_distance(ps.assembled(target), exact.matrix());
        },
        py::arg("params"), py::arg("t"), py::arg("order") = 2, py::arg("n_max") = 12,
        "Trace distance between the perturbative state and exact evolution from the dark state.");

    m.def(
        "excitation_spectrum",
        [](double delta_p, const SystemParams& p) { return normalized_spectrum(delta_p, p); }, py::arg("delta_p"),
        py::arg("params"), "Probe excitation spectrum in units of gamma * Omega_P^2.");
    m.def(
        "resonances",
        [](const SystemParams& p) {
            const ResonancePair r = resonances(p);
            py::dict d;
            d["delta_plus"] = r.delta_plus;
            d["delta_minus"] = r.delta_minus;
            d["gamma_plus"] = r.gamma_plus;
            d["gamma_minus"] = r.gamma_minus;
            d["regime_valid"] = r.regime_valid;
            return d;
        },
        py::arg("params"));

    const auto pattern = [](const std::string& parity, double n) {
        if (parity != "even" && parity != "odd") throw InvalidArgument("parity must be 'even' or 'odd'");
        return PatternSpec{parity == "even" ? Parity::even : Parity::odd, n};
    };
    m.def("adiabatic_alpha", &adiabatic_alpha, py::arg("params"));
    m.def(
        "in_phase_alpha",
        [pattern](const SystemParams& p, double n, const std::string& parity) {
            return in_phase_alpha(p, pattern(parity, n));
        },
        py::arg("params"), py::arg("n_atoms"), py::arg("parity") = "even");
    m.def(
        "excited_population",
        [pattern](const SystemParams& p, double n, const std::string& parity) {
            return excited_population(p, pattern(parity, n));
        },
        py::arg("params"), py::arg("n_atoms"), py::arg("parity") = "even");
    m.def(
        "critical_atom_number",
        [](const SystemParams& p) {
            const CriticalAtomNumbers c = critical_atom_number(p);
            return py::make_tuple(c.n0, c.n0_delta);
        },
        py::arg("params"));
    m.def(
        "semiclassical_force",
        [](double x, cplx alpha, const SystemParams& p) { return semiclassical_force(x, alpha, p).force; },
        py::arg("x"), py::arg("alpha"), py::arg("params"), "Force in units of hbar k gamma.");
    m.def("restoring_coefficient", &restoring_coefficient, py::arg("params"), py::arg("n_atoms"));

    m.def("_run", [](const std::string& text) {
        const RunConfig config = parse_config(nlohmann::json::parse(text));
        SweepResult r;
        {
            py::gil_scoped_release release;
            r = run(config);
        }
        return result_tuple(r);
    });
    m.def("_figure", [](const std::string& name, int workers) {
        std::vector<SweepResult> results;
        {
            py::gil_scoped_release release;
            results = figure(name, workers);
        }
        py::list out;
        for (const SweepResult& r : results) out.append(result_tuple(r));
        return out;
    });
    m.def("_figure_names", &figure_names);
}
