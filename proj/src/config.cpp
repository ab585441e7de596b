#include "cqed/config.hpp"

#include <cmath>
#include <fstream>
#include <regex>
#include <set>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(where + ": must be finite");
    return v;
}

long long integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return j.get<long long>();
}

std::string text(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError(where + ": expected a string");
    return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Mode parse_mode(const std::string& s) {
    if (s == "steady") return Mode::steady;
    if (s == "evolve") return Mode::evolve;
    if (s == "spectrum") return Mode::spectrum;
    if (s == "stark") return Mode::stark;
    if (s == "collective") return Mode::collective;
    if (s == "figure") return Mode::figure;
    throw ConfigError("mode: unknown value '" + s + "'");
}

void parse_params(const json& j, RunConfig& c) {
    check_keys(j, "params",
               {"positions", "g0", "omega", "theta", "delta", "delta_c", "kappa", "gamma", "pump_amplitudes", "n_max"});
    SystemParams& p = c.params;
    if (j.contains("positions")) p.positions = numbers(j["positions"], "params.positions");
    if (j.contains("pump_amplitudes")) p.pump_amplitudes = numbers(j["pump_amplitudes"], "params.pump_amplitudes");
    const std::pair<const char*, double*> fields[] = {{"g0", &p.g0},       {"omega", &p.omega}, {"theta", &p.theta},
                                                      {"delta", &p.delta}, {"delta_c", &p.delta_c},
                                                      {"kappa", &p.kappa}, {"gamma", &p.gamma}};
    for (const auto& [key, dst] : fields) {
        if (j.contains(key)) *dst = number(j[key], std::string("params.") + key);
    }
    if (j.contains("n_max")) {
        const long long n = integer(j["n_max"], "params.n_max");
        if (n < 1) throw ConfigError("params.n_max: must be >= 1");
        c.n_max = static_cast<int>(n);
    }
}

SweepAxis parse_sweep(const json& j, const std::string& where) {
    check_keys(j, where, {"param", "start", "stop", "points", "scale"});
    for (const char* key : {"param", "start", "stop", "points"}) {
        if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
    }
    SweepAxis a;
    a.param = text(j["param"], where + ".param");
    if (!is_sweepable(a.param)) throw ConfigError(where + ".param: '" + a.param + "' is not sweepable");
    a.start = number(j["start"], where + ".start");
    a.stop = number(j["stop"], where + ".stop");
    const long long points = integer(j["points"], where + ".points");
    if (points < 2) throw ConfigError(where + ".points: a sweep needs at least 2 points");
    if (points > 1000000) throw ConfigError(where + ".points: too many points");
    a.points = static_cast<int>(points);
    if (j.contains("scale")) {
        const std::string s = text(j["scale"], where + ".scale");
        if (s == "linear") {
            a.scale = SweepScale::linear;
        } else if (s == "log") {
            a.scale = SweepScale::log;
        } else {
            throw ConfigError(where + ".scale: expected 'linear' or 'log'");
        }
    }
    if (!(a.start < a.stop)) throw ConfigError(where + ": start must be below stop");
    if (a.scale == SweepScale::log && !(a.start > 0.0)) throw ConfigError(where + ": log sweep needs start > 0");
    return a;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        v[static_cast<std::size_t>(i)] = scale == SweepScale::linear
                                             ? start + f * (stop - start)
                                             : std::exp(std::log(start) + f * (std::log(stop) - std::log(start)));
    }
    v.front() = start;
    v.back() = stop;
    return v;
}

bool is_sweepable(const std::string& path) {
    static const std::set<std::string> scalars = {"kappa", "g0", "omega", "theta", "delta", "delta_c", "gamma",
                                                  "delta_p", "omega_p_tilde", "x_probe", "delta_2", "n_atoms",
                                                  "t_final"};
    static const std::regex indexed(R"(positions\[(\d+)\])");
    return scalars.contains(path) || std::regex_match(path, indexed);
}

void apply_parameter(RunConfig& c, const std::string& path, double value) {
    SystemParams& p = c.params;
    static const std::regex indexed(R"(positions\[(\d+)\])");
    std::smatch m;
    if (path == "kappa") {
        p.kappa = value;
    } else if (path == "g0") {
        p.g0 = value;
    } else if (path == "omega") {
        p.omega = value;
    } else if (path == "theta") {
        p.theta = value;
    } else if (path == "delta") {
        p.delta = value;
    } else if (path == "delta_c") {
        p.delta_c = value;
    } else if (path == "gamma") {
        p.gamma = value;
    } else if (path == "delta_p") {
        c.probe.delta_p = value;
    } else if (path == "omega_p_tilde") {
        c.probe.omega_p_tilde = value;
    } else if (path == "x_probe") {
        c.x_probe = value;
    } else if (path == "delta_2") {
        c.delta_2 = value;
    } else if (path == "t_final") {
        c.t_final = value;
    } else if (path == "n_atoms") {
        if (!c.pattern) throw ConfigError("n_atoms can only be swept with a pattern");
        c.pattern->n_atoms = value;
    } else if (std::regex_match(path, m, indexed)) {
        const std::size_t i = std::stoul(m[1].str());
        if (i >= p.positions.size()) throw ConfigError(path + ": atom index out of range");
        p.positions[i] = value;
    } else {
        throw ConfigError("'" + path + "' is not a sweepable parameter");
    }
}

RunConfig parse_config(const json& j) {
    check_keys(j, "config",
               {"mode", "params", "sweep", "sweep2", "output", "seed", "n_workers", "figure", "evolve", "probe",
                "stark", "pattern"});
    RunConfig c;
    if (!j.contains("mode")) throw ConfigError("config: missing 'mode'");
    c.mode = parse_mode(text(j["mode"], "mode"));
    if (j.contains("params")) parse_params(j["params"], c);
    if (j.contains("pattern")) {
        const json& pj = j["pattern"];
        check_keys(pj, "pattern", {"parity", "n_atoms"});
        PatternSpec ps;
        if (pj.contains("parity")) {
            const std::string s = text(pj["parity"], "pattern.parity");
            if (s == "even") {
                ps.parity = Parity::even;
            } else if (s == "odd") {
                ps.parity = Parity::odd;
            } else {
                throw ConfigError("pattern.parity: expected 'even' or 'odd'");
            }
        }
        if (pj.contains("n_atoms")) ps.n_atoms = number(pj["n_atoms"], "pattern.n_atoms");
        if (!(ps.n_atoms > 0.0)) throw ConfigError("pattern.n_atoms: must be positive");
        c.pattern = ps;
    }
    if (j.contains("sweep")) c.sweeps.push_back(parse_sweep(j["sweep"], "sweep"));
    if (j.contains("sweep2")) {
        if (c.sweeps.empty()) throw ConfigError("sweep2 requires sweep");
        c.sweeps.push_back(parse_sweep(j["sweep2"], "sweep2"));
        if (c.sweeps[0].param == c.sweeps[1].param) throw ConfigError("sweep and sweep2 vary the same parameter");
    }
    for (const SweepAxis& a : c.sweeps) {
        if (a.param == "n_atoms" && (!c.pattern || c.mode != Mode::collective)) {
            throw ConfigError("sweeping n_atoms requires mode 'collective' with a pattern");
        }
    }
    if (j.contains("output")) {
        const json& oj = j["output"];
        check_keys(oj, "output", {"path", "format"});
        if (oj.contains("path")) c.output_path = text(oj["path"], "output.path");
        if (oj.contains("format")) {
            const std::string f = text(oj["format"], "output.format");
            if (f == "csv") {
                c.format = OutputFormat::csv;
            } else if (f == "json") {
                c.format = OutputFormat::json;
            } else {
                throw ConfigError("output.format: expected 'csv' or 'json'");
            }
        }
    }
    if (j.contains("seed")) c.seed = integer(j["seed"], "seed");
    if (j.contains("n_workers")) {
        const long long w = integer(j["n_workers"], "n_workers");
        if (w < 1) throw ConfigError("n_workers: must be >= 1");
        c.n_workers = static_cast<int>(std::min<long long>(w, 1024));
    }
    if (j.contains("figure")) c.figure = text(j["figure"], "figure");
    if (c.mode == Mode::figure && c.figure.empty()) throw ConfigError("mode 'figure' requires 'figure'");
    if (j.contains("evolve")) {
        check_keys(j["evolve"], "evolve", {"t_final"});
        if (j["evolve"].contains("t_final")) c.t_final = number(j["evolve"]["t_final"], "evolve.t_final");
        if (!(c.t_final >= 0.0)) throw ConfigError("evolve.t_final: must be nonnegative");
    }
    if (j.contains("probe")) {
        check_keys(j["probe"], "probe", {"delta_p", "omega_p_tilde"});
        if (j["probe"].contains("delta_p")) c.probe.delta_p = number(j["probe"]["delta_p"], "probe.delta_p");
        if (j["probe"].contains("omega_p_tilde")) {
            c.probe.omega_p_tilde = number(j["probe"]["omega_p_tilde"], "probe.omega_p_tilde");
        }
    }
    if (j.contains("stark")) {
        check_keys(j["stark"], "stark", {"x_probe", "delta_2"});
        if (j["stark"].contains("x_probe")) c.x_probe = number(j["stark"]["x_probe"], "stark.x_probe");
        if (j["stark"].contains("delta_2")) c.delta_2 = number(j["stark"]["delta_2"], "stark.delta_2");
    }
    try {
        c.params.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
    for (const SweepAxis& a : c.sweeps) {
        // Rejects out-of-range atom indices up front.
        RunConfig probe = c;
        apply_parameter(probe, a.param, a.start);
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::steady: return "steady";
        case Mode::evolve: return "evolve";
        case Mode::spectrum: return "spectrum";
        case Mode::stark: return "stark";
        case Mode::collective: return "collective";
        case Mode::figure: return "figure";
    }
    return "unknown";
}

json to_json(const RunConfig& c) {
    const SystemParams& p = c.params;
    json params = {{"positions", p.positions}, {"g0", p.g0},           {"omega", p.omega}, {"theta", p.theta},
                   {"delta", p.delta},         {"delta_c", p.delta_c}, {"kappa", p.kappa}, {"gamma", p.gamma}};
    if (!p.pump_amplitudes.empty()) params["pump_amplitudes"] = p.pump_amplitudes;
    if (c.n_max) params["n_max"] = *c.n_max;
    json j = {{"mode", mode_name(c.mode)}, {"params", params}, {"seed", c.seed}, {"n_workers", c.n_workers}};
    const auto axis = [](const SweepAxis& a) {
        return json{{"param", a.param},
                    {"start", a.start},
                    {"stop", a.stop},
                    {"points", a.points},
                    {"scale", a.scale == SweepScale::linear ? "linear" : "log"}};
    };
    if (!c.sweeps.empty()) j["sweep"] = axis(c.sweeps[0]);
    if (c.sweeps.size() > 1) j["sweep2"] = axis(c.sweeps[1]);
    if (!c.output_path.empty()) {
        j["output"] = {{"path", c.output_path}, {"format", c.format == OutputFormat::csv ? "csv" : "json"}};
    }
    if (!c.figure.empty()) j["figure"] = c.figure;
    j["evolve"] = {{"t_final", c.t_final}};
    j["probe"] = {{"delta_p", c.probe.delta_p}, {"omega_p_tilde", c.probe.omega_p_tilde}};
    j["stark"] = {{"x_probe", c.x_probe}, {"delta_2", c.delta_2}};
    if (c.pattern) {
        j["pattern"] = {{"parity", c.pattern->parity == Parity::even ? "even" : "odd"},
                        {"n_atoms", c.pattern->n_atoms}};
    }
    return j;
}

}  // namespace cqed
