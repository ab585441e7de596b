#include <algorithm>
#include <cmath>
#include <map>

#include "cqed/collective.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"
#include "cqed/perturbative.hpp"
#include "cqed/spectrum.hpp"
#include "cqed/sweep.hpp"
#include "rows.hpp"

namespace cqed {

namespace {

using detail::kNaN;
using nlohmann::json;

constexpr int kGridPoints = 201;

std::vector<double> linspace(double a, double b, int n) {
    SweepAxis axis{"", a, b, n, SweepScale::linear};
    return axis.values();
}

std::vector<double> logspace(double a, double b, int n) {
    SweepAxis axis{"", a, b, n, SweepScale::log};
    return axis.values();
}

std::vector<std::string> with_echo(std::vector<std::string> columns) {
    for (std::string& c : detail::echo_columns()) columns.push_back(std::move(c));
    return columns;
}

void append_echo(Row& row, const SystemParams& p) {
    Row echo = detail::echo_cells(p);
    row.insert(row.end(), echo.begin(), echo.end());
}

json params_json(const SystemParams& p) {
    return {{"positions", p.positions}, {"g0", p.g0},           {"omega", p.omega}, {"theta", p.theta},
            {"delta", p.delta},         {"delta_c", p.delta_c}, {"kappa", p.kappa}, {"gamma", p.gamma}};
}

json grid_json(const std::string& param, const std::vector<double>& v, const std::string& scale) {
    return {{"param", param}, {"start", v.front()}, {"stop", v.back()}, {"points", v.size()}, {"scale", scale}};
}

// Evaluates body(i) for each grid point, turning exceptions into an error
// status with `width` NaN cells.
template <class Body>
Row guarded(std::size_t width, Row prefix, Body body) {
    std::string status = "ok";
    try {
        Row values = body();
        prefix.insert(prefix.end(), values.begin(), values.end());
    } catch (const std::exception& e) {
        status = detail::failure_status(e);
        for (std::size_t k = 0; k < width; ++k) prefix.emplace_back(kNaN);
    }
    prefix.emplace_back(status);
    return prefix;
}

SystemParams single_atom(double g0, double omega, double kappa) {
    SystemParams p;
    p.positions = {0.0};
    p.g0 = g0;
    p.omega = omega;
    p.kappa = kappa;
    return p;
}

SweepResult fig2(const std::string& name, double g0, int workers) {
    const auto start = detail::Clock::now();
    const std::vector<double> kappas = linspace(0.01, 2.0, kGridPoints);
    const SystemParams base = single_atom(g0, 1.0, 0.0);
    Table table(with_echo({"kappa", "i_at", "i_cav", "mean_n", "i_at_free_space", "i_at_small_kappa",
                           "i_cav_small_kappa", "n_max", "residual", "escalations", "status"}));
    const double free = free_space_fluorescence(base.omega, base.delta, base.gamma);
    auto rows = parallel_rows(kappas.size(), workers, [&](std::size_t i) {
        SystemParams p = base;
        p.kappa = kappas[i];
        Row row = guarded(9, {p.kappa}, [&] {
            const SteadyPoint sp = solve_steady_point(p);
            const SmallKappaRates sk = small_kappa_rates(p);
            return Row{sp.obs.i_at_total, sp.obs.i_cav, sp.obs.mean_n, free, sk.i_at, sk.i_cav,
                       static_cast<long long>(sp.space.n_max()), sp.residual, static_cast<long long>(sp.escalations)};
        });
        append_echo(row, p);
        return row;
    });
    for (Row& r : rows) table.add_row(std::move(r));
    json meta = {{"description", "steady-state cavity and atomic emission rates versus cavity loss"},
                 {"parameters", params_json(base)},
                 {"grid", grid_json("kappa", kappas, "linear")}};
    return detail::finish(name, std::move(table), std::move(meta), start, workers);
}

SweepResult fig3(int workers) {
    const auto start = detail::Clock::now();
    const std::vector<double> kappas = linspace(0.01, 2.0, kGridPoints);
    const std::vector<double> couplings{1.0, 10.0};
    Table table(with_echo({"g0", "kappa", "mean_n", "g2_zero", "n_max", "residual", "status"}));
    auto rows = parallel_rows(kappas.size() * couplings.size(), workers, [&](std::size_t i) {
        SystemParams p = single_atom(couplings[i / kappas.size()], 1.0, kappas[i % kappas.size()]);
        Row row = guarded(4, {p.g0, p.kappa}, [&] {
            const SteadyPoint sp = solve_steady_point(p);
            return Row{sp.obs.mean_n, sp.obs.g2_zero.value_or(kNaN), static_cast<long long>(sp.space.n_max()),
                       sp.residual};
        });
        append_echo(row, p);
        return row;
    });
    for (Row& r : rows) table.add_row(std::move(r));
    json meta = {{"description", "mean photon number and g2(0) versus cavity loss, long format over g0"},
                 {"parameters", params_json(single_atom(1.0, 1.0, 0.0))},
                 {"g0_values", couplings},
                 {"grid", grid_json("kappa", kappas, "linear")}};
    return detail::finish("fig3", std::move(table), std::move(meta), start, workers);
}

SweepResult fig4(const std::string& name, double delta, int workers) {
    const auto start = detail::Clock::now();
    const std::vector<double> detunings = linspace(-4.0, 4.0, kGridPoints);
    SystemParams base = single_atom(1.0, 1.0, 0.0);
    base.delta = delta;
    Table table(with_echo({"delta_p", "w", "abs_t2", "valid", "status"}));
    const ProbeParams unit{0.0, 1.0};
    auto rows = parallel_rows(detunings.size(), workers, [&](std::size_t i) {
        const double d = detunings[i];
        Row row = guarded(3, {d}, [&] {
            return Row{normalized_spectrum(d, base), std::norm(transition_amplitude(d, base, unit)), 1LL};
        });
        append_echo(row, base);
        return row;
    });
    for (Row& r : rows) table.add_row(std::move(r));
    const ResonancePair res = resonances(base);
    json meta = {{"description", "excitation spectrum w / (gamma Omega_P^2) versus probe detuning"},
                 {"parameters", params_json(base)},
                 {"grid", grid_json("delta_p", detunings, "linear")},
                 {"resonances",
                  {{"delta_plus", res.delta_plus},
                   {"delta_minus", res.delta_minus},
                   {"gamma_plus", res.gamma_plus},
                   {"gamma_minus", res.gamma_minus}}}};
    return detail::finish(name, std::move(table), std::move(meta), start, workers);
}

SweepResult fig5(int workers) {
    const auto start = detail::Clock::now();
    const std::vector<double> distances = linspace(0.0, 2.0, kGridPoints);
    const std::vector<double> kappas{0.0, 1.0, 2.0};
    constexpr double kDelta2 = 1000.0;
    std::vector<cplx> alphas(kappas.size(), cplx(kNaN, kNaN));
    std::vector<std::string> errors(kappas.size());
    (void)parallel_rows(kappas.size(), workers, [&](std::size_t k) {
        try {
            alphas[k] = solve_steady_point(single_atom(1.0, 1.0, kappas[k])).obs.alpha;
        } catch (const std::exception& e) {
            errors[k] = detail::failure_status(e);
        }
        return Row{};
    });
    Table table(with_echo({"kappa", "d", "delta_atom", "re_alpha", "im_alpha", "valid", "status"}));
    for (std::size_t k = 0; k < kappas.size(); ++k) {
        const SystemParams p = single_atom(1.0, 1.0, kappas[k]);
        for (double d : distances) {
            Row row = guarded(4, {p.kappa, d}, [&] {
                if (!errors[k].empty()) throw SolverError(errors[k]);
                return Row{probe_stark_shift(d, kDelta2, p, alphas[k]), alphas[k].real(), alphas[k].imag(),
                           static_cast<long long>(stark_dispersive(kDelta2, p))};
            });
            append_echo(row, p);
            table.add_row(std::move(row));
        }
    }
    json meta = {{"description", "dispersive shift of a probe atom at distance d from the pumped atom"},
                 {"parameters", params_json(single_atom(1.0, 1.0, 0.0))},
                 {"kappa_values", kappas},
                 {"delta_2", kDelta2},
                 {"grid", grid_json("d", distances, "linear")}};
    return detail::finish("fig5", std::move(table), std::move(meta), start, workers);
}

SystemParams two_atoms(double x2, double kappa, double delta) {
    SystemParams p;
    p.positions = {0.0, x2};
    p.g0 = 10.0;
    p.omega = 1.0;
    p.kappa = kappa;
    p.delta = delta;
    return p;
}

SweepResult two_atom_scan(const std::string& name, double kappa, double delta, int workers) {
    const auto start = detail::Clock::now();
    const std::vector<double> xs = linspace(0.0, 1.0, kGridPoints);
    Table table(with_echo({"x2", "mean_n", "pi_e_1", "pi_e_2", "i_cav", "i_at_total", "n_max", "residual",
                           "escalations", "status"}));
    auto rows = parallel_rows(xs.size(), workers, [&](std::size_t i) {
        const SystemParams p = two_atoms(xs[i], kappa, delta);
        Row row = guarded(8, {xs[i]}, [&] {
            const SteadyPoint sp = solve_steady_point(p);
            return Row{sp.obs.mean_n, sp.obs.pi_e_per_atom[0], sp.obs.pi_e_per_atom[1], sp.obs.i_cav,
                       sp.obs.i_at_total, static_cast<long long>(sp.space.n_max()), sp.residual,
                       static_cast<long long>(sp.escalations)};
        });
        append_echo(row, p);
        return row;
    });
    for (Row& r : rows) table.add_row(std::move(r));
    json meta = {{"description", "two atoms: photon number and excited populations versus x2 (x1 = 0)"},
                 {"parameters", params_json(two_atoms(0.0, kappa, delta))},
                 {"grid", grid_json("x2", xs, "linear")}};
    return detail::finish(name, std::move(table), std::move(meta), start, workers);
}

double emission_ratio(const ObservableSet& obs) {
    return obs.i_at_total > 0.0 ? obs.i_cav / obs.i_at_total : std::numeric_limits<double>::infinity();
}

SweepResult fig8a(int workers) {
    const auto start = detail::Clock::now();
    constexpr int kSide = 101;
    constexpr int kLast = kSide - 1;
    const std::vector<double> xs = linspace(0.0, 1.0, kSide);
    // On this grid g(x_i) = g(x_{100-i}) and phi = 0, and the observables
    // used here are symmetric under exchanging the atoms.
    const auto fold = [](int i) { return std::min(i, kLast - i); };
    std::map<std::pair<int, int>, std::size_t> slot;
    std::vector<std::pair<int, int>> unique;
    for (int i = 0; i < kSide; ++i) {
        for (int j = 0; j < kSide; ++j) {
            const int a = fold(i);
            const int b = fold(j);
            const auto key = std::minmax(a, b);
            if (slot.emplace(key, unique.size()).second) unique.push_back(key);
        }
    }
    struct Cached {
        double ratio = kNaN, i_cav = kNaN, i_at = kNaN, residual = kNaN;
        long long n_max = 0;
        std::string status;
    };
    std::vector<Cached> cache(unique.size());
    (void)parallel_rows(unique.size(), workers, [&](std::size_t k) {
        const auto [a, b] = unique[k];
        SystemParams p = two_atoms(xs[static_cast<std::size_t>(b)], 0.2, 100.0);
        p.positions[0] = xs[static_cast<std::size_t>(a)];
        Cached& c = cache[k];
        try {
            const SteadyPoint sp = solve_steady_point(p);
            c = {emission_ratio(sp.obs), sp.obs.i_cav, sp.obs.i_at_total, sp.residual,
                 static_cast<long long>(sp.space.n_max()), "ok"};
        } catch (const std::exception& e) {
            c.status = detail::failure_status(e);
        }
        return Row{};
    });
    Table table(with_echo({"x1", "x2", "ratio", "i_cav", "i_at_total", "n_max", "residual", "status"}));
    for (int i = 0; i < kSide; ++i) {
        for (int j = 0; j < kSide; ++j) {
            const Cached& c = cache[slot.at(std::minmax(fold(i), fold(j)))];
            SystemParams p = two_atoms(xs[static_cast<std::size_t>(j)], 0.2, 100.0);
            p.positions[0] = xs[static_cast<std::size_t>(i)];
            Row row{p.positions[0], p.positions[1], c.ratio, c.i_cav, c.i_at, c.n_max, c.residual, c.status};
            append_echo(row, p);
            table.add_row(std::move(row));
        }
    }
    json meta = {{"description", "ratio I_cav / I_at over both atom positions (diagonal x1 = x2 included)"},
                 {"parameters", params_json(two_atoms(0.0, 0.2, 100.0))},
                 {"grid", {grid_json("x1", xs, "linear"), grid_json("x2", xs, "linear")}},
                 {"distinct_solves", unique.size()}};
    return detail::finish("fig8a", std::move(table), std::move(meta), start, workers);
}

SweepResult fig8b(int workers) {
    const auto start = detail::Clock::now();
    const std::vector<double> xs = linspace(0.0, 1.0, kGridPoints);
    const std::vector<double> kappas{0.2, 1.0};
    Table table(with_echo({"kappa", "x2", "ratio", "i_cav", "i_at_total", "n_max", "residual", "status"}));
    auto rows = parallel_rows(xs.size() * kappas.size(), workers, [&](std::size_t i) {
        const SystemParams p = two_atoms(xs[i % xs.size()], kappas[i / xs.size()], 100.0);
        Row row = guarded(5, {p.kappa, p.positions[1]}, [&] {
            const SteadyPoint sp = solve_steady_point(p);
            return Row{emission_ratio(sp.obs), sp.obs.i_cav, sp.obs.i_at_total,
                       static_cast<long long>(sp.space.n_max()), sp.residual};
        });
        append_echo(row, p);
        return row;
    });
    for (Row& r : rows) table.add_row(std::move(r));
    json meta = {{"description", "ratio I_cav / I_at versus x2 with x1 = 0"},
                 {"parameters", params_json(two_atoms(0.0, 0.2, 100.0))},
                 {"kappa_values", kappas},
                 {"grid", grid_json("x2", xs, "linear")}};
    return detail::finish("fig8b", std::move(table), std::move(meta), start, workers);
}

SweepResult fig9(const std::string& name, double delta, int workers) {
    const auto start = detail::Clock::now();
    const std::vector<double> detunings = linspace(-0.2, 0.2, kGridPoints);
    const std::vector<double> kappas{0.0, 0.01};
    Table table(with_echo({"delta_c", "mean_n", "kappa", "pi_e", "re_alpha", "im_alpha", "valid", "status"}));
    auto rows = parallel_rows(detunings.size() * kappas.size(), workers, [&](std::size_t i) {
        SystemParams p = single_atom(0.1, 0.1, kappas[i / detunings.size()]);
        p.delta = delta;
        p.delta_c = detunings[i % detunings.size()];
        Row row = guarded(5, {p.delta_c}, [&] {
            const cplx a = adiabatic_alpha(p);
            return Row{std::norm(a), p.kappa, adiabatic_excited_populations(p).front(), a.real(), a.imag(),
                       static_cast<long long>(effective_field_params(p).below_saturation)};
        });
        // Keep the kappa column aligned on failure.
        if (std::get<std::string>(row.back()) != "ok") row[2] = p.kappa;
        append_echo(row, p);
        return row;
    });
    for (Row& r : rows) table.add_row(std::move(r));
    SystemParams base = single_atom(0.1, 0.1, 0.0);
    base.delta = delta;
    json meta = {{"description", "adiabatic mean photon number and excited population versus delta_c"},
                 {"parameters", params_json(base)},
                 {"kappa_values", kappas},
                 {"grid", grid_json("delta_c", detunings, "linear")}};
    return detail::finish(name, std::move(table), std::move(meta), start, workers);
}

SweepResult n_scan(const std::string& name, const SystemParams& base, int workers) {
    const auto start = detail::Clock::now();
    const std::vector<double> ns = logspace(1.0, 1e6, 61);
    Table table(with_echo({"n_atoms", "i_cav", "i_at_total", "re_alpha", "im_alpha", "abs_alpha", "pi_e", "mean_n",
                           "valid", "status"}));
    auto rows = parallel_rows(ns.size(), workers, [&](std::size_t i) {
        const PatternSpec pattern{Parity::even, ns[i]};
        Row row = guarded(8, {ns[i]}, [&] {
            const cplx a = in_phase_alpha(base, pattern);
            const double pe = excited_population(base, pattern);
            const double sat = std::sqrt(base.gamma * base.gamma / 4.0 + base.delta * base.delta);
            const bool below = sat >= 5.0 * std::sqrt(ns[i]) * std::max(std::abs(base.g0), std::abs(base.omega));
            return Row{base.kappa * std::norm(a), ns[i] * base.gamma * pe, a.real(), a.imag(), std::abs(a), pe,
                       std::norm(a), static_cast<long long>(below)};
        });
        append_echo(row, base);
        return row;
    });
    for (Row& r : rows) table.add_row(std::move(r));
    const CriticalAtomNumbers crit = critical_atom_number(base);
    json meta = {{"description", "in-phase pattern: cavity and total fluorescence rates versus atom number"},
                 {"parameters", params_json(base)},
                 {"pattern", "even"},
                 {"grid", grid_json("n_atoms", ns, "log")},
                 {"n0", crit.n0},
                 {"n0_delta", crit.n0_delta}};
    return detail::finish(name, std::move(table), std::move(meta), start, workers);
}

SystemParams collective_params(double g, double kappa, double delta, double delta_c) {
    SystemParams p = single_atom(g, g, kappa);
    p.delta = delta;
    p.delta_c = delta_c;
    return p;
}

}  // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names = {"fig2a", "fig2b", "fig3",  "fig4a", "fig4b", "fig5",
                                                   "fig6",  "fig7",  "fig8",  "fig8a", "fig8b", "fig9",
                                                   "fig9a", "fig9b", "fig10", "fig11", "fig11a", "fig11b"};
    return names;
}

std::vector<SweepResult> figure(const std::string& name, int workers) {
    workers = effective_workers(workers);
    if (name == "fig2a") return {fig2("fig2a", 1.0, workers)};
    if (name == "fig2b") return {fig2("fig2b", 10.0, workers)};
    if (name == "fig3") return {fig3(workers)};
    if (name == "fig4a") return {fig4("fig4a", 0.0, workers)};
    if (name == "fig4b") return {fig4("fig4b", -2.0, workers)};
    if (name == "fig5") return {fig5(workers)};
    if (name == "fig6") return {two_atom_scan("fig6", 0.2, 100.0, workers)};
    if (name == "fig7") return {two_atom_scan("fig7", 0.01, 0.0, workers)};
    if (name == "fig8a") return {fig8a(workers)};
    if (name == "fig8b") return {fig8b(workers)};
    if (name == "fig8") return {fig8a(workers), fig8b(workers)};
    if (name == "fig9a") return {fig9("fig9a", 0.0, workers)};
    if (name == "fig9b") return {fig9("fig9b", 1.0, workers)};
    if (name == "fig9") return {fig9("fig9a", 0.0, workers), fig9("fig9b", 1.0, workers)};
    if (name == "fig10") return {n_scan("fig10", collective_params(1e-3, 1e-3, 0.0, 0.0), workers)};
    if (name == "fig11a") return {n_scan("fig11a", collective_params(10.0, 10.0, -1000.0, 0.0), workers)};
    if (name == "fig11b") return {n_scan("fig11b", collective_params(10.0, 10.0, -1000.0, -5.0), workers)};
    if (name == "fig11") {
        return {n_scan("fig11a", collective_params(10.0, 10.0, -1000.0, 0.0), workers),
                n_scan("fig11b", collective_params(10.0, 10.0, -1000.0, -5.0), workers)};
    }
    throw ConfigError("unknown figure '" + name + "'");
}

}  // namespace cqed
