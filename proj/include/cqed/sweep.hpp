#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cqed/config.hpp"
#include "cqed/table.hpp"

namespace cqed {

struct SweepResult {
    std::string name;
    Table table;
    nlohmann::json metadata;   ///< parameters, grid, solver summary, wall time
    std::size_t failed_rows = 0;
    std::size_t invalid_rows = 0;  ///< rows outside a formula's validity regime
};

/// Worker count after applying the CQED_MAX_WORKERS cap (minimum 1).
[[nodiscard]] int effective_workers(int requested);

/// Evaluates fn(0..n-1) on up to `workers` threads; results keep index order.
[[nodiscard]] std::vector<Row> parallel_rows(std::size_t n, int workers, const std::function<Row(std::size_t)>& fn);

/// Runs a non-figure config over its sweep grid (a single point without sweep).
[[nodiscard]] SweepResult run(const RunConfig& config);

/// Panels produced by a figure preset; group names (fig8, fig9, fig11)
/// return one result per panel.
[[nodiscard]] std::vector<SweepResult> figure(const std::string& name, int workers = 1);
[[nodiscard]] const std::vector<std::string>& figure_names();

/// Writes `<dir>/<name>.csv` (or .json) and a `<name>.meta.json` sidecar.
/// Returns the written data paths.
std::vector<std::string> write_results(const std::vector<SweepResult>& results, const std::string& dir,
                                       OutputFormat format = OutputFormat::csv);
/// Writes the table to `path` and the metadata to `path + ".meta.json"`.
void write_result(const SweepResult& result, const std::string& path, OutputFormat format = OutputFormat::csv);

}  // namespace cqed
