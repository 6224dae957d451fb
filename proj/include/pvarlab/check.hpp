#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace pvarlab {

/// One evaluated instance of an inequality lhs <= rhs.
struct Margin {
    std::string where;
    double lhs = 0.0;
    double rhs = 0.0;

    [[nodiscard]] double margin() const noexcept { return rhs - lhs; }
};

/// Outcome of checking an inequality at many arguments. An entry passes when
/// its margin is >= -tolerance * max(1, |lhs|, |rhs|), i.e. rounding-level
/// violations are absorbed and recorded through the tolerance.
struct MarginReport {
    std::string id;
    double tolerance = 1e-12;
    std::vector<Margin> entries;

    void add(std::string where, double lhs, double rhs) { entries.push_back({std::move(where), lhs, rhs}); }

    [[nodiscard]] double slack(const Margin& m) const noexcept {
        return tolerance * std::max({1.0, std::abs(m.lhs), std::abs(m.rhs)});
    }

    [[nodiscard]] bool passes(const Margin& m) const noexcept {
        return !std::isnan(m.margin()) && m.margin() >= -slack(m);
    }

    [[nodiscard]] bool pass() const noexcept {
        return std::all_of(entries.begin(), entries.end(), [this](const Margin& m) { return passes(m); });
    }

    [[nodiscard]] std::size_t violations() const noexcept {
        return static_cast<std::size_t>(
            std::count_if(entries.begin(), entries.end(), [this](const Margin& m) { return !passes(m); }));
    }

    /// Entry with the smallest margin (a default entry when empty).
    [[nodiscard]] Margin worst() const {
        if (entries.empty()) return {};
        return *std::min_element(entries.begin(), entries.end(),
                                 [](const Margin& a, const Margin& b) { return a.margin() < b.margin(); });
    }

    void merge(const MarginReport& other) {
        entries.insert(entries.end(), other.entries.begin(), other.entries.end());
        tolerance = std::max(tolerance, other.tolerance);
    }
};

/// Observed ratio lhs / bracket standing in for an unspecified absolute constant.
struct MeasuredConstant {
    double lhs = 0.0;
    double bracket = 0.0;
    double value = 0.0;
    bool skipped = false;  // 0/0

    static MeasuredConstant of(double lhs, double bracket) {
        MeasuredConstant m{lhs, bracket, 0.0, false};
        if (bracket == 0.0 && lhs == 0.0) {
            m.skipped = true;
        } else {
            m.value = bracket == 0.0 ? std::numeric_limits<double>::infinity() : lhs / bracket;
        }
        return m;
    }

    [[nodiscard]] bool finite() const noexcept { return skipped || std::isfinite(value); }
};

}  // namespace pvarlab
