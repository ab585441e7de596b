#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/collective.hpp"
#include "cqed/spectrum.hpp"

namespace cqed {

enum class Mode { steady, evolve, spectrum, stark, collective, figure };
enum class SweepScale { linear, log };
enum class OutputFormat { csv, json };

struct SweepAxis {
    std::string param;
    double start = 0.0;
    double stop = 0.0;
    int points = 2;
    SweepScale scale = SweepScale::linear;

    /// Grid including both end points.
    [[nodiscard]] std::vector<double> values() const;
};

struct RunConfig {
    Mode mode = Mode::steady;
    SystemParams params;
    std::optional<int> n_max;
    std::vector<SweepAxis> sweeps;  ///< at most two; the second varies fastest
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    long long seed = 0;  ///< reserved; every mode is deterministic
    int n_workers = 1;
    std::string figure;  ///< preset name for mode "figure"
    double t_final = 10.0;
    ProbeParams probe;
    double x_probe = 0.5;
    double delta_2 = 1000.0;
    std::optional<PatternSpec> pattern;
};

/// Strict parse: unknown keys, wrong types and inconsistent values throw ConfigError.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Sets a sweepable parameter: kappa, g0, omega, theta, delta, delta_c,
/// gamma, positions[i], delta_p, omega_p_tilde, x_probe, delta_2, n_atoms
/// (pattern), t_final.
void apply_parameter(RunConfig& config, const std::string& path, double value);
[[nodiscard]] bool is_sweepable(const std::string& path);

[[nodiscard]] std::string mode_name(Mode mode);
[[nodiscard]] nlohmann::json to_json(const RunConfig& config);

}  // namespace cqed
