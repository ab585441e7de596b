#include "cqed/table.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return csv_escape(std::get<std::string>(c));
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return buf;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::add_row(Row row) {
    if (row.size() != columns_.size()) {
        throw InvalidArgument("row has " + std::to_string(row.size()) + " cells, table has " +
                              std::to_string(columns_.size()) + " columns");
    }
    rows_.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i] == name) return i;
    }
    throw InvalidArgument("unknown column '" + name + "'");
}

std::vector<double> Table::numbers(const std::string& name) const {
    const std::size_t k = column_index(name);
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const Row& r : rows_) {
        if (const auto* d = std::get_if<double>(&r[k])) {
            out.push_back(*d);
        } else if (const auto* i = std::get_if<long long>(&r[k])) {
            out.push_back(static_cast<double>(*i));
        } else {
            out.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    return out;
}

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (i) out += ',';
        out += csv_escape(columns_[i]);
    }
    out += '\n';
    for (const Row& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += cell_text(r[i]);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json Table::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const Row& r : rows_) {
        nlohmann::json row = nlohmann::json::array();
        for (const Cell& c : r) {
            if (const auto* d = std::get_if<double>(&c)) {
                if (std::isfinite(*d)) {
                    row.push_back(*d);
                } else {
                    row.push_back(format_double(*d));
                }
            } else if (const auto* i = std::get_if<long long>(&c)) {
                row.push_back(*i);
            } else {
                row.push_back(std::get<std::string>(c));
            }
        }
        rows.push_back(std::move(row));
    }
    return {{"columns", columns_}, {"rows", std::move(rows)}};
}

}  // namespace cqed
