#pragma once

// Tabular output for the command-line front end: CSV with RFC 4180 quoting
// or a JSON document {"metadata": {...}, "rows": [{...}, ...]}.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace divgraph {

inline constexpr const char* kVersion = "1.0.0";

using Cell = std::variant<std::int64_t, std::uint64_t, double, bool, std::string>;

/// Shortest round-trip representation of a double.
inline std::string format_double(double v) {
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns_.size()) throw std::logic_error("Table: row width does not match header");
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    void write_csv(std::ostream& os) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_escape(columns_[i]);
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) os << ',';
                os << csv_escape(cell_text(row[i]));
            }
            os << '\n';
        }
    }

    void write_json(std::ostream& os, const nlohmann::json& metadata) const {
        nlohmann::json doc;
        doc["metadata"] = metadata;
        doc["rows"] = nlohmann::json::array();
        for (const auto& row : rows_) {
            nlohmann::json obj = nlohmann::json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                std::visit([&](const auto& v) { obj[columns_[i]] = v; }, row[i]);
            }
            doc["rows"].push_back(std::move(obj));
        }
        os << doc.dump(2) << '\n';
    }

private:
    static std::string cell_text(const Cell& c) {
        struct Visitor {
            std::string operator()(std::int64_t v) const { return std::to_string(v); }
            std::string operator()(std::uint64_t v) const { return std::to_string(v); }
            std::string operator()(double v) const { return format_double(v); }
            std::string operator()(bool v) const { return v ? "1" : "0"; }
            std::string operator()(const std::string& v) const { return v; }
        };
        return std::visit(Visitor{}, c);
    }

    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace divgraph
