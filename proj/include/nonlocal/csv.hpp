#pragma once

// Deterministic CSV emission and strict parsing. Numbers are written in
// std::to_chars shortest round-trip form: locale-independent, '.' decimal
// separator, and byte-stable across re-runs, so re-emitted artifacts can be
// compared with a plain byte diff. Files are opened in binary mode for the
// same reason.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "nonlocal/errors.hpp"
#include "nonlocal/gronwall.hpp"

namespace nonlocal {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) throw numerical_error("format_double: conversion failed");
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::string join_row(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

}  // namespace detail

// Rectangular numeric table; every row must match the header width.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    if (header.empty()) throw parameter_error("write_csv: header must not be empty");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_csv: cannot open " + path + " for writing");
    out << detail::join_row(header);
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw parameter_error("write_csv: row width " + std::to_string(row.size()) +
                                  " does not match header width " + std::to_string(header.size()));
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (double v : row) cells.push_back(format_double(v));
        out << detail::join_row(cells);
    }
    out.flush();
    if (!out) throw io_error("write_csv: write failed for " + path);
}

// Two-column table with a string key, e.g. named residuals.
inline void write_named_csv(const std::string& path, const std::string& key_header,
                            const std::string& value_header, const std::vector<std::string>& names,
                            const std::vector<double>& values) {
    if (names.size() != values.size()) throw parameter_error("write_named_csv: name/value length mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("write_named_csv: cannot open " + path + " for writing");
    out << key_header << ',' << value_header << '\n';
    for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << ',' << format_double(values[i]) << '\n';
    out.flush();
    if (!out) throw io_error("write_named_csv: write failed for " + path);
}

namespace detail {

inline double parse_cell(const std::string& path, std::size_t lineno, std::string_view cell,
                         const char* column) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw config_error(path + ":" + std::to_string(lineno) + ": column '" + column +
                           "' is not a number: '" + std::string(cell) + "'");
    return v;
}

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

// Strict reader for a trajectory table with the exact header "t,y,g,h".
// Malformed content reports the 1-based line number; the window length r is
// the caller's parameter, not part of the file.
inline TrajectoryTriple read_trajectory_csv(const std::string& path, double r) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_trajectory_csv: cannot open " + path);
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) throw config_error(path + ":1: empty file, expected header t,y,g,h");
    detail::strip_cr(line);
    if (line != "t,y,g,h")
        throw config_error(path + ":1: expected header 't,y,g,h', got '" + line + "'");

    TrajectoryTriple tr;
    tr.r = r;
    static constexpr const char* kColumns[4] = {"t", "y", "g", "h"};
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (line.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": empty line");
        double cells[4];
        std::size_t field = 0;
        std::size_t start = 0;
        for (std::size_t pos = 0; pos <= line.size(); ++pos) {
            if (pos == line.size() || line[pos] == ',') {
                if (field >= 4)
                    throw config_error(path + ":" + std::to_string(lineno) +
                                       ": expected 4 columns (t,y,g,h), got more");
                cells[field] = detail::parse_cell(path, lineno,
                                                  std::string_view(line).substr(start, pos - start),
                                                  kColumns[field]);
                ++field;
                start = pos + 1;
            }
        }
        if (field != 4)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected 4 columns (t,y,g,h), got " +
                               std::to_string(field));
        tr.t.push_back(cells[0]);
        tr.y.push_back(cells[1]);
        tr.g.push_back(cells[2]);
        tr.h.push_back(cells[3]);
    }
    if (tr.t.empty()) throw config_error(path + ": no data rows after the header");
    return tr;
}

// Strict reader for a two-column numeric table; the header must match exactly.
// Used to load a previously emitted final state (x,u) for cross-run comparison.
inline std::pair<std::vector<double>, std::vector<double>> read_xy_csv(const std::string& path,
                                                                       const std::string& x_header,
                                                                       const std::string& y_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("read_xy_csv: cannot open " + path);
    std::string line;
    std::size_t lineno = 1;
    const std::string want = x_header + "," + y_header;
    if (!std::getline(in, line)) throw config_error(path + ":1: empty file, expected header " + want);
    detail::strip_cr(line);
    if (line != want) throw config_error(path + ":1: expected header '" + want + "', got '" + line + "'");
    std::pair<std::vector<double>, std::vector<double>> out;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (line.empty()) throw config_error(path + ":" + std::to_string(lineno) + ": empty line");
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected 2 columns");
        out.first.push_back(detail::parse_cell(path, lineno, std::string_view(line).substr(0, comma),
                                               x_header.c_str()));
        out.second.push_back(detail::parse_cell(path, lineno, std::string_view(line).substr(comma + 1),
                                                y_header.c_str()));
    }
    if (out.first.empty()) throw config_error(path + ": no data rows after the header");
    return out;
}

}  // namespace nonlocal
