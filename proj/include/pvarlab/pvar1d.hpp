#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pvarlab/grid.hpp"
#include "pvarlab/summation.hpp"

namespace pvarlab {

/// Strictly increasing grid indices read cyclically: the last point is
/// followed by the first one shifted by a full period.
class CyclicPartition {
public:
    CyclicPartition() = default;

    CyclicPartition(std::vector<std::size_t> indices, std::size_t period)
        : indices_(std::move(indices)) {
        if (indices_.empty()) throw std::invalid_argument("partition must be nonempty");
        for (std::size_t k = 0; k < indices_.size(); ++k) {
            if (indices_[k] >= period) throw std::invalid_argument("partition index out of range");
            if (k > 0 && indices_[k] <= indices_[k - 1]) {
                throw std::invalid_argument("partition indices must be strictly increasing");
            }
        }
    }

    static CyclicPartition full(std::size_t period) {
        std::vector<std::size_t> all(period);
        for (std::size_t k = 0; k < period; ++k) all[k] = k;
        return CyclicPartition(std::move(all), period);
    }

    [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
    [[nodiscard]] std::size_t operator[](std::size_t k) const noexcept { return indices_[k]; }
    [[nodiscard]] std::size_t next(std::size_t k) const noexcept { return indices_[(k + 1) % indices_.size()]; }
    [[nodiscard]] const std::vector<std::size_t>& indices() const noexcept { return indices_; }

    friend bool operator==(const CyclicPartition&, const CyclicPartition&) = default;

private:
    std::vector<std::size_t> indices_;
};

/// v_p(g; partition): l^p norm of the cyclic increments along the partition.
inline double pvar_sum(const Grid1& g, const CyclicPartition& part, const Exponent& p) {
    if (part.size() == 0) throw std::invalid_argument("pvar_sum: empty partition");
    std::vector<double> terms;
    terms.reserve(part.size());
    for (std::size_t k = 0; k < part.size(); ++k) {
        terms.push_back(abs_pow(g[part.next(k)] - g[part[k]], p.value()));
    }
    return root_p(canonical_sum(terms), p.value());
}

struct PVarResult {
    double value = 0.0;
    CyclicPartition partition;
};

namespace detail {

/// Indices that can belong to an optimal partition: for p >= 1 a point lying
/// weakly between its neighbours can be dropped without lowering the sum, so
/// only strict cyclic local extrema (after merging equal neighbours) remain.
/// The first global maximum is always kept.
inline std::vector<std::size_t> extremal_indices(const Grid1& g) {
    const std::size_t n = g.size();
    std::size_t anchor = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (g[k] > g[anchor]) anchor = k;

    std::vector<std::size_t> merged{anchor};
    for (std::size_t step = 1; step < n; ++step) {
        const std::size_t k = (anchor + step) % n;
        if (g[k] != g[merged.back()]) merged.push_back(k);
    }
    while (merged.size() > 1 && g[merged.back()] == g[anchor]) merged.pop_back();
    if (merged.size() <= 2) return merged;

    std::vector<std::size_t> kept;
    const std::size_t m = merged.size();
    for (std::size_t k = 0; k < m; ++k) {
        const double here = g[merged[k]];
        const double before = g[merged[(k + m - 1) % m]];
        const double after = g[merged[(k + 1) % m]];
        if ((here > before && here > after) || (here < before && here < after)) kept.push_back(merged[k]);
    }
    return kept;
}

/// Chain DP over `order` (cyclic, order[0] is the anchor and closes the
/// cycle). Returns the selected positions in `order`.
template <typename Cost>
std::vector<std::size_t> best_closed_chain(std::size_t m, Cost&& cost, double* objective = nullptr) {
    std::vector<double> best(m + 1, 0.0);
    std::vector<std::size_t> prev(m + 1, 0), count(m + 1, 1);
    for (std::size_t j = 1; j <= m; ++j) {
        best[j] = -1.0;
        for (std::size_t i = 0; i < j; ++i) {
            const double cand = best[i] + cost(i, j % m);
            if (cand > best[j] || (cand == best[j] && count[i] + 1 < count[j])) {
                best[j] = cand;
                prev[j] = i;
                count[j] = count[i] + 1;
            }
        }
    }
    std::vector<std::size_t> chain;
    for (std::size_t j = prev[m];; j = prev[j]) {
        chain.push_back(j);
        if (j == 0) break;
    }
    std::reverse(chain.begin(), chain.end());
    if (objective) *objective = best[m];
    return chain;
}

}  // namespace detail

struct PVarOptions {
    bool prune_to_extrema = true;
};

/// Exact Wiener p-variation over cyclic partitions of the grid.
///
/// For p = 1 the full grid partition is optimal and is returned directly.
/// For p > 1 the sequence is rotated so that a global maximum comes first
/// (some optimal partition always contains it) and an O(n^2) chain DP picks
/// the best partition; the value is then recomputed on that partition with
/// order-independent summation.
inline PVarResult pvar_cyclic(const Grid1& g, const Exponent& p, PVarOptions opts = {}) {
    const std::size_t n = g.size();
    if (p.is_one()) {
        auto full = CyclicPartition::full(n);
        return {pvar_sum(g, full, p), std::move(full)};
    }

    std::vector<std::size_t> order;
    if (opts.prune_to_extrema) {
        order = detail::extremal_indices(g);
    } else {
        std::size_t anchor = 0;
        for (std::size_t k = 1; k < n; ++k)
            if (g[k] > g[anchor]) anchor = k;
        for (std::size_t step = 0; step < n; ++step) order.push_back((anchor + step) % n);
    }

    const std::size_t m = order.size();
    const double pv = p.value();
    auto chain = detail::best_closed_chain(
        m, [&](std::size_t i, std::size_t j) { return abs_pow(g[order[j]] - g[order[i]], pv); });

    std::vector<std::size_t> picked;
    picked.reserve(chain.size());
    for (std::size_t pos : chain) picked.push_back(order[pos]);
    std::sort(picked.begin(), picked.end());
    CyclicPartition part(std::move(picked), n);
    const double value = pvar_sum(g, part, p);
    return {value, std::move(part)};
}

inline double pvar(const Grid1& g, const Exponent& p) { return pvar_cyclic(g, p).value; }

inline constexpr std::size_t kPVarOracleLimit = 18;

/// Brute force over every nonempty index subset. Ground truth for small N.
inline double pvar_oracle(const Grid1& g, const Exponent& p, std::size_t limit = kPVarOracleLimit) {
    const std::size_t n = g.size();
    if (n > limit || n > kPVarOracleLimit) throw std::invalid_argument("pvar_oracle: grid too large");
    const double pv = p.value();
    std::vector<double> pair(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) pair[a * n + b] = abs_pow(g[b] - g[a], pv);

    // Fast scan with plain sums, then exact re-evaluation of every subset that
    // could be the maximum once rounding is accounted for.
    const std::uint32_t total = std::uint32_t{1} << n;
    std::vector<double> fast(total, 0.0);
    double best_fast = 0.0;
    std::vector<std::size_t> idx;
    idx.reserve(n);
    for (std::uint32_t mask = 1; mask < total; ++mask) {
        idx.clear();
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (std::uint32_t{1} << k)) idx.push_back(k);
        double s = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) s += pair[idx[k] * n + idx[(k + 1) % idx.size()]];
        fast[mask] = s;
        best_fast = std::max(best_fast, s);
    }
    const double cutoff = best_fast * (1.0 - 1e-10);
    double best = 0.0;
    std::vector<double> terms;
    for (std::uint32_t mask = 1; mask < total; ++mask) {
        if (fast[mask] < cutoff) continue;
        idx.clear();
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (std::uint32_t{1} << k)) idx.push_back(k);
        terms.clear();
        for (std::size_t k = 0; k < idx.size(); ++k) terms.push_back(pair[idx[k] * n + idx[(k + 1) % idx.size()]]);
        best = std::max(best, canonical_sum(terms));
    }
    return root_p(best, pv);
}

/// Omega_p(g) = (mean over all sample pairs of |g_i - g_j|^p)^(1/p).
inline double omega_p_functional(const Grid1& g, const Exponent& p) {
    const std::size_t n = g.size();
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) acc.add(abs_pow(g[i] - g[j], p.value()));
    return root_p(acc.value() / static_cast<double>(n * n), p.value());
}

}  // namespace pvarlab
