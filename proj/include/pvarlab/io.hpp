#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "pvarlab/grid.hpp"

namespace pvarlab {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using AnyGrid = std::variant<Grid1, Grid2>;

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, end);
}

inline double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw FormatError("non-numeric cell '" + std::string(text) + "'");
    }
    return v;
}

namespace detail {

inline void write_rows(std::ostream& out, std::size_t rows, std::size_t cols,
                       std::span<const double> data) {
    out << "# pvarlab grid " << rows << ' ' << cols << '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (j) out << ',';
            out << format_double(data[i * cols + j]);
        }
        out << '\n';
    }
}

}  // namespace detail

inline void write_csv(std::ostream& out, const Grid1& g) {
    detail::write_rows(out, 1, g.size(), g.samples());
}

inline void write_csv(std::ostream& out, const Grid2& f) {
    detail::write_rows(out, f.rows(), f.cols(), f.data());
}

inline void write_csv(std::ostream& out, const AnyGrid& g) {
    std::visit([&out](const auto& grid) { write_csv(out, grid); }, g);
}

namespace detail {

inline std::vector<double> parse_row(std::string_view view) {
    std::vector<double> row;
    while (true) {
        const auto comma = view.find(',');
        row.push_back(parse_double(view.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        view.remove_prefix(comma + 1);
    }
    return row;
}

inline AnyGrid to_grid(std::size_t M, std::size_t N, std::vector<double> data) {
    try {
        if (M == 1) return Grid1(std::move(data));
        return Grid2(M, N, std::move(data));
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
}

/// Plain comma-separated rows without a header; shape taken from the data.
inline AnyGrid read_headerless(std::istream& in, std::string line) {
    std::vector<double> data;
    std::size_t M = 0, N = 0;
    do {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto row = parse_row(line);
        if (M == 0) N = row.size();
        if (row.size() != N) {
            throw FormatError("ragged row " + std::to_string(M) + ": expected " + std::to_string(N) +
                              " cells, got " + std::to_string(row.size()));
        }
        data.insert(data.end(), row.begin(), row.end());
        ++M;
    } while (std::getline(in, line));
    if (M == 0) throw FormatError("empty input");
    return to_grid(M, N, std::move(data));
}

}  // namespace detail

/// Reads the `# pvarlab grid M N` format. A single row (M = 1) is a Grid1.
/// Input without a header line is read as plain rows.
inline AnyGrid read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty input");
    if (line.empty() || line[0] != '#') return detail::read_headerless(in, std::move(line));
    std::istringstream header(line);
    std::string hash, tag, kind;
    long long rows = -1, cols = -1;
    header >> hash >> tag >> kind >> rows >> cols;
    std::string rest;
    if (hash != "#" || tag != "pvarlab" || kind != "grid" || header.fail() || (header >> rest) ||
        rows < 1 || cols < 1) {
        throw FormatError("malformed header, expected '# pvarlab grid M N'");
    }
    const auto M = static_cast<std::size_t>(rows);
    const auto N = static_cast<std::size_t>(cols);
    std::vector<double> data;
    data.reserve(M * N);
    std::size_t seen = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (seen == M) throw FormatError("more rows than declared in header");
        const auto row = detail::parse_row(line);
        const std::size_t count = row.size();
        data.insert(data.end(), row.begin(), row.end());
        if (count != N) {
            throw FormatError("ragged row " + std::to_string(seen) + ": expected " +
                              std::to_string(N) + " cells, got " + std::to_string(count));
        }
        ++seen;
    }
    if (seen != M) throw FormatError("fewer rows than declared in header");
    return detail::to_grid(M, N, std::move(data));
}

inline AnyGrid load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return read_csv(in);
}

template <typename G>
void save_csv(const G& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_csv(out, grid);
}

}  // namespace pvarlab
