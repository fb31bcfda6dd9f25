#pragma once
// heliox/csv.hpp - the one CSV dialect every emitter uses
//
// '#'-prefixed header lines, one comma-separated column-name line, then rows in
// %.16e. No timestamps anywhere, so reruns are byte-identical.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "heliox/errors.hpp"

namespace heliox {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header_lines; ///< written as "# <line>"
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size()) throw NumericalError("csv row width does not match column count");
        rows.push_back(std::move(row));
    }

    /// Column by name (for tests and post-processing).
    std::vector<double> column(const std::string& name) const {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (columns[c] != name) continue;
            std::vector<double> out;
            out.reserve(rows.size());
            for (const auto& r : rows) out.push_back(r[c]);
            return out;
        }
        throw UsageError("no column named '" + name + "'");
    }
};

inline void write_csv(std::ostream& os, const CsvTable& t) {
    for (const auto& h : t.header_lines) os << "# " << h << '\n';
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << format_double(r[c]);
        os << '\n';
    }
}

} // namespace heliox
