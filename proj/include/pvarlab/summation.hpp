#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace pvarlab {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Sum of nonnegative terms, independent of the order in which they were
// produced: terms are sorted ascending before compensated accumulation, so two
// index sets with the same multiset of terms give the same double.
inline double canonical_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    CompensatedSum acc;
    for (double t : terms) acc.add(t);
    return acc.value();
}

inline double compensated_sum(std::span<const double> terms) {
    CompensatedSum acc;
    for (double t : terms) acc.add(t);
    return acc.value();
}

// |x|^p with exact fast paths for the exponents used most.
inline double abs_pow(double x, double p) noexcept {
    const double a = std::abs(x);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

// s^(1/p) for s >= 0.
inline double root_p(double s, double p) noexcept {
    if (p == 1.0) return s;
    if (p == 2.0) return std::sqrt(s);
    return std::pow(s, 1.0 / p);
}

}  // namespace pvarlab
