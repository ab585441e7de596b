#pragma once

#include <chrono>
#include <limits>
#include <string>
#include <vector>

#include "cqed/model.hpp"
#include "cqed/sweep.hpp"

namespace cqed::detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// p_positions, p_g0, ... : enough to rerun one point.
std::vector<std::string> echo_columns();
Row echo_cells(const SystemParams& params);
std::string join_numbers(const std::vector<double>& values);

/// "ok" or "error: <message>"
std::string failure_status(const std::exception& e);

using Clock = std::chrono::steady_clock;

/// Fills counts, wall time and summary fields. Rows count as failed when
/// column "status" is not "ok" and as invalid when column "valid" is 0.
SweepResult finish(std::string name, Table table, nlohmann::json metadata, Clock::time_point start, int workers);

}  // namespace cqed::detail
