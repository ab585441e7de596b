// simulate: command-line front end for steady-state, evolution, spectrum,
// Stark-shift and collective sweeps, and the figure presets.
//
// Exit codes: 0 success, 2 configuration error, 3 every row failed,
// 4 validity-regime violation under --strict.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cqed/errors.hpp"
#include "cqed/sweep.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kSolverFailure = 3;
constexpr int kStrictViolation = 4;

int status_for(const std::vector<cqed::SweepResult>& results, bool strict) {
    int code = kOk;
    for (const cqed::SweepResult& r : results) {
        const std::size_t rows = r.table.size();
        if (rows > 0 && r.failed_rows == rows) return kSolverFailure;
        if (r.failed_rows > 0) {
            std::fprintf(stderr, "%s: %zu of %zu rows failed\n", r.name.c_str(), r.failed_rows, rows);
        }
        if (r.invalid_rows > 0) {
            std::fprintf(stderr, "%s: %zu rows outside the validity regime\n", r.name.c_str(), r.invalid_rows);
            if (strict) code = kStrictViolation;
        }
    }
    return code;
}

void report(const std::vector<std::string>& paths) {
    for (const std::string& p : paths) std::printf("wrote %s\n", p.c_str());
}

int run_figure(const std::string& name, const std::string& out, int workers, bool strict,
               cqed::OutputFormat format = cqed::OutputFormat::csv) {
    const std::vector<cqed::SweepResult> results = cqed::figure(name, workers);
    report(cqed::write_results(results, out, format));
    return status_for(results, strict);
}

int run_config(const std::string& path, bool strict) {
    const cqed::RunConfig config = cqed::load_config(path);
    if (config.mode == cqed::Mode::figure) {
        const std::string out = config.output_path.empty() ? "." : config.output_path;
        return run_figure(config.figure, out, config.n_workers, strict, config.format);
    }
    const cqed::SweepResult result = cqed::run(config);
    if (config.output_path.empty()) {
        std::cout << (config.format == cqed::OutputFormat::csv ? result.table.to_csv()
                                                                : result.table.to_json().dump(1) + "\n");
    } else {
        cqed::write_result(result, config.output_path, config.format);
        report({config.output_path});
    }
    return status_for({result}, strict);
}

int validate_config(const std::string& path) {
    const cqed::RunConfig config = cqed::load_config(path);
    std::size_t points = 1;
    for (const cqed::SweepAxis& a : config.sweeps) points *= static_cast<std::size_t>(a.points);
    std::printf("ok: mode %s", cqed::mode_name(config.mode).c_str());
    if (config.mode == cqed::Mode::figure) {
        std::printf(", figure %s\n", config.figure.c_str());
    } else {
        std::printf(", %zu grid point%s, %d atom%s\n", points, points == 1 ? "" : "s", config.params.n_atoms(),
                    config.params.n_atoms() == 1 ? "" : "s");
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Driven atoms in a lossy cavity: master-equation and closed-form sweeps"};
    app.require_subcommand(1);

    std::string config_path;
    bool strict = false;
    auto* run = app.add_subcommand("run", "run a sweep described by a JSON config");
    run->add_option("config", config_path, "config file")->required();
    run->add_flag("--strict", strict, "exit 4 when any row is outside its validity regime");

    std::string name;
    std::string out = ".";
    int workers = 1;
    auto* fig = app.add_subcommand("figure", "reproduce a figure preset");
    fig->add_option("name", name, "preset name")->required();
    fig->add_option("--out", out, "output directory");
    fig->add_option("--workers", workers, "worker threads (capped by CQED_MAX_WORKERS)")->check(CLI::PositiveNumber);
    fig->add_flag("--strict", strict, "exit 4 when any row is outside its validity regime");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", validate_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) return run_config(config_path, strict);
        if (*fig) return run_figure(name, out, workers, strict);
        if (*validate) return validate_config(validate_path);
    } catch (const cqed::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kSolverFailure;
    }
    return kOk;
}
