#include "cqed/sweep.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"
#include "rows.hpp"

namespace cqed {

namespace detail {

std::vector<std::string> echo_columns() {
    return {"p_positions", "p_g0", "p_omega", "p_theta", "p_delta", "p_delta_c", "p_kappa", "p_gamma"};
}

std::string join_numbers(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ';';
        out += format_double(values[i]);
    }
    return out;
}

Row echo_cells(const SystemParams& p) {
    return {join_numbers(p.positions), p.g0, p.omega, p.theta, p.delta, p.delta_c, p.kappa, p.gamma};
}

std::string failure_status(const std::exception& e) { return std::string("error: ") + e.what(); }

SweepResult finish(std::string name, Table table, nlohmann::json metadata, Clock::time_point start, int workers) {
    SweepResult r;
    r.name = std::move(name);
    const std::size_t status = table.column_index("status");
    std::size_t valid = table.columns().size();
    for (std::size_t i = 0; i < table.columns().size(); ++i) {
        if (table.columns()[i] == "valid") valid = i;
    }
    for (const Row& row : table.rows()) {
        const auto* s = std::get_if<std::string>(&row[status]);
        if (!s || *s != "ok") ++r.failed_rows;
        if (valid < row.size()) {
            const auto* v = std::get_if<long long>(&row[valid]);
            if (v && *v == 0) ++r.invalid_rows;
        }
    }
    metadata["name"] = r.name;
    metadata["columns"] = table.columns();
    metadata["rows"] = table.size();
    metadata["failed_rows"] = r.failed_rows;
    metadata["invalid_rows"] = r.invalid_rows;
    metadata["workers"] = workers;
    metadata["units"] = "rates and frequencies in units of gamma, positions in wavelengths, hbar = 1";
    metadata["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
    r.metadata = std::move(metadata);
    r.table = std::move(table);
    return r;
}

}  // namespace detail

namespace {

using detail::kNaN;

struct ModeLayout {
    std::vector<std::string> columns;
    std::function<Row(const RunConfig&)> evaluate;
};

Row observable_cells(const ObservableSet& obs, int n_atoms) {
    Row r{obs.mean_n, obs.alpha.real(), obs.alpha.imag(), obs.i_cav, obs.i_at_total};
    for (int k = 0; k < n_atoms; ++k) r.emplace_back(obs.pi_e_per_atom[static_cast<std::size_t>(k)]);
    r.emplace_back(obs.g2_zero.value_or(kNaN));
    return r;
}

std::vector<std::string> observable_columns(int n_atoms) {
    std::vector<std::string> c{"mean_n", "re_alpha", "im_alpha", "i_cav", "i_at_total"};
    for (int k = 0; k < n_atoms; ++k) c.push_back("pi_e_" + std::to_string(k));
    c.emplace_back("g2_zero");
    return c;
}

ModeLayout layout_for(const RunConfig& base) {
    const int n = base.params.n_atoms();
    ModeLayout m;
    switch (base.mode) {
        case Mode::steady:
        case Mode::evolve: {
            m.columns = observable_columns(n);
            for (const char* c : {"n_max", "residual", "fock_tail", "escalations", "valid"}) m.columns.emplace_back(c);
            const bool evolve = base.mode == Mode::evolve;
            m.evaluate = [n, evolve](const RunConfig& c) {
                Row r;
                if (evolve) {
                    const SpaceDescriptor space =
                        c.n_max ? SpaceDescriptor(c.params.n_atoms(), *c.n_max) : default_space(c.params);
                    const DensityMatrix rho =
                        cqed::evolve(DensityMatrix::ground(space), build_liouvillian(c.params, space), c.t_final);
                    r = observable_cells(observables(rho, c.params), n);
                    r.insert(r.end(), {static_cast<long long>(space.n_max()), kNaN, fock_tail(rho), 0LL, 1LL});
                } else {
                    const SteadyPoint sp = solve_steady_point(c.params, c.n_max);
                    r = observable_cells(sp.obs, n);
                    r.insert(r.end(), {static_cast<long long>(sp.space.n_max()), sp.residual, fock_tail(sp.rho),
                                       static_cast<long long>(sp.escalations), 1LL});
                }
                return r;
            };
            break;
        }
        case Mode::spectrum:
            m.columns = {"w", "re_t", "im_t", "valid"};
            m.evaluate = [](const RunConfig& c) {
                const ProbeParams unit{c.probe.delta_p, 1.0};
                const cplx t = transition_amplitude(c.probe.delta_p, c.params, unit);
                return Row{normalized_spectrum(c.probe.delta_p, c.params), t.real(), t.imag(),
                           static_cast<long long>(c.probe.weak(c.params))};
            };
            break;
        case Mode::stark:
            m.columns = {"delta_atom", "re_alpha", "im_alpha", "valid"};
            m.evaluate = [](const RunConfig& c) {
                const cplx alpha = solve_steady_point(c.params, c.n_max).obs.alpha;
                return Row{probe_stark_shift(c.x_probe, c.delta_2, c.params, alpha), alpha.real(), alpha.imag(),
                           static_cast<long long>(stark_dispersive(c.delta_2, c.params))};
            };
            break;
        case Mode::collective:
            m.columns = {"re_alpha", "im_alpha", "abs_alpha", "mean_n", "i_cav"};
            if (base.pattern) {
                m.columns.insert(m.columns.end(), {"pi_e", "i_at_total", "valid"});
                m.evaluate = [](const RunConfig& c) {
                    const cplx a = in_phase_alpha(c.params, *c.pattern);
                    const double pe = excited_population(c.params, *c.pattern);
                    const double g = c.params.g0;
                    const double sat = std::sqrt(c.params.gamma * c.params.gamma / 4.0 + c.params.delta * c.params.delta);
                    const bool below =
                        sat >= 5.0 * std::sqrt(c.pattern->n_atoms) * std::max(std::abs(g), std::abs(c.params.omega));
                    return Row{a.real(), a.imag(), std::abs(a), std::norm(a), c.params.kappa * std::norm(a), pe,
                               c.pattern->n_atoms * c.params.gamma * pe, static_cast<long long>(below)};
                };
            } else {
                for (int k = 0; k < n; ++k) m.columns.push_back("pi_e_" + std::to_string(k));
                m.columns.insert(m.columns.end(), {"i_at_total", "valid"});
                m.evaluate = [](const RunConfig& c) {
                    const cplx a = adiabatic_alpha(c.params);
                    const std::vector<double> pe = adiabatic_excited_populations(c.params);
                    Row r{a.real(), a.imag(), std::abs(a), std::norm(a), c.params.kappa * std::norm(a)};
                    double total = 0.0;
                    for (double p : pe) {
                        r.emplace_back(p);
                        total += c.params.gamma * p;
                    }
                    r.emplace_back(total);
                    r.emplace_back(static_cast<long long>(effective_field_params(c.params).below_saturation));
                    return r;
                };
            }
            break;
        case Mode::figure:
            throw ConfigError("figure configs are run through figure()");
    }
    return m;
}

std::vector<std::string> extra_echo_columns(const RunConfig& c) {
    switch (c.mode) {
        case Mode::evolve: return {"p_t_final"};
        case Mode::spectrum: return {"p_delta_p", "p_omega_p_tilde"};
        case Mode::stark: return {"p_x_probe", "p_delta_2"};
        case Mode::collective:
            if (c.pattern) return {"p_parity", "p_n_atoms"};
            return {};
        default: return {};
    }
}

Row extra_echo_cells(const RunConfig& c) {
    switch (c.mode) {
        case Mode::evolve: return {c.t_final};
        case Mode::spectrum: return {c.probe.delta_p, c.probe.omega_p_tilde};
        case Mode::stark: return {c.x_probe, c.delta_2};
        case Mode::collective:
            if (c.pattern) return {std::string(c.pattern->parity == Parity::even ? "even" : "odd"), c.pattern->n_atoms};
            return {};
        default: return {};
    }
}

}  // namespace

int effective_workers(int requested) {
    int w = std::max(1, requested);
    if (const char* cap = std::getenv("CQED_MAX_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(cap, &end, 10);
        if (end != cap && *end == '\0' && v >= 1) w = std::min<long>(w, v);
    }
    return w;
}

std::vector<Row> parallel_rows(std::size_t n, int workers, const std::function<Row(std::size_t)>& fn) {
    std::vector<Row> rows(n);
    const auto threads = static_cast<std::size_t>(std::min<long long>(effective_workers(workers), static_cast<long long>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) rows[i] = fn(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                rows[i] = fn(i);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return rows;
}

SweepResult run(const RunConfig& config) {
    const auto start = detail::Clock::now();
    const ModeLayout layout = layout_for(config);

    std::vector<std::vector<double>> axes;
    for (const SweepAxis& a : config.sweeps) axes.push_back(a.values());
    std::size_t total = 1;
    for (const auto& v : axes) total *= v.size();

    std::vector<std::string> columns;
    for (const SweepAxis& a : config.sweeps) columns.push_back(a.param);
    columns.insert(columns.end(), layout.columns.begin(), layout.columns.end());
    columns.emplace_back("status");
    for (const std::string& c : detail::echo_columns()) columns.push_back(c);
    if (config.n_max) columns.emplace_back("p_n_max");
    for (const std::string& c : extra_echo_columns(config)) columns.push_back(c);

    const std::size_t n_values = layout.columns.size();
    std::vector<Row> rows = parallel_rows(total, config.n_workers, [&](std::size_t index) {
        RunConfig point = config;
        Row row;
        // Row-major over the axes: the last axis varies fastest.
        std::size_t rem = index;
        std::vector<double> coords(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            coords[k] = axes[k][rem % axes[k].size()];
            rem /= axes[k].size();
        }
        for (std::size_t k = 0; k < axes.size(); ++k) {
            apply_parameter(point, config.sweeps[k].param, coords[k]);
            row.emplace_back(coords[k]);
        }
        std::string status = "ok";
        try {
            Row values = layout.evaluate(point);
            row.insert(row.end(), values.begin(), values.end());
        } catch (const std::exception& e) {
            status = detail::failure_status(e);
            for (std::size_t k = 0; k < n_values; ++k) row.emplace_back(kNaN);
        }
        row.emplace_back(status);
        Row echo = detail::echo_cells(point.params);
        row.insert(row.end(), echo.begin(), echo.end());
        if (point.n_max) row.emplace_back(static_cast<long long>(*point.n_max));
        Row extra = extra_echo_cells(point);
        row.insert(row.end(), extra.begin(), extra.end());
        return row;
    });

    Table table(columns);
    for (Row& r : rows) table.add_row(std::move(r));
    nlohmann::json meta = {{"config", to_json(config)}};
    return detail::finish(config.output_path.empty() ? mode_name(config.mode) : config.output_path, std::move(table),
                          std::move(meta), start, effective_workers(config.n_workers));
}

void write_result(const SweepResult& result, const std::string& path, OutputFormat format) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot write '" + path + "'");
        out << (format == OutputFormat::csv ? result.table.to_csv() : result.table.to_json().dump(1) + "\n");
    }
    std::ofstream meta(path + ".meta.json", std::ios::binary);
    if (!meta) throw Error("cannot write '" + path + ".meta.json'");
    meta << result.metadata.dump(1) << "\n";
}

std::vector<std::string> write_results(const std::vector<SweepResult>& results, const std::string& dir,
                                       OutputFormat format) {
    std::vector<std::string> paths;
    for (const SweepResult& r : results) {
        const std::string path =
            (std::filesystem::path(dir) / (r.name + (format == OutputFormat::csv ? ".csv" : ".json"))).string();
        write_result(r, path, format);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace cqed
