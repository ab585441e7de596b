#pragma once

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace cqed {

using Cell = std::variant<double, long long, std::string>;
using Row = std::vector<Cell>;

/// Column-ordered result table with deterministic text output.
class Table {
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns);

    [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
    [[nodiscard]] const std::vector<Row>& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }

    void add_row(Row row);
    /// Throws InvalidArgument for an unknown column.
    [[nodiscard]] std::size_t column_index(const std::string& name) const;
    /// Numeric column; strings map to NaN.
    [[nodiscard]] std::vector<double> numbers(const std::string& name) const;

    /// Header plus one line per row; doubles with 17 significant digits.
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] nlohmann::json to_json() const;

private:
    std::vector<std::string> columns_;
    std::vector<Row> rows_;
};

/// %.17g, with "nan", "inf" and "-inf" for non-finite values.
[[nodiscard]] std::string format_double(double v);

}  // namespace cqed
