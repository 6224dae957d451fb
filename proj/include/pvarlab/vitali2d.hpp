#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pvarlab/check.hpp"
#include "pvarlab/grid.hpp"
#include "pvarlab/pvar1d.hpp"
#include "pvarlab/summation.hpp"

namespace pvarlab {

/// Product of a row partition and a column partition.
struct Net {
    CyclicPartition rows;
    CyclicPartition cols;

    static Net finest(const Grid2& f) {
        return {CyclicPartition::full(f.rows()), CyclicPartition::full(f.cols())};
    }

    friend bool operator==(const Net&, const Net&) = default;
};

namespace detail {

inline double mixed_difference(const Grid2& f, std::size_t r0, std::size_t r1, std::size_t c0,
                               std::size_t c1) {
    return (f(r1, c1) - f(r1, c0)) - (f(r0, c1) - f(r0, c0));
}

inline void require_net(const Grid2& f, const Net& net) {
    if (net.rows.size() == 0 || net.cols.size() == 0) throw std::invalid_argument("net must be nonempty");
    if (net.rows.indices().back() >= f.rows() || net.cols.indices().back() >= f.cols()) {
        throw std::invalid_argument("net index out of range");
    }
}

}  // namespace detail

/// v_p^(2)(f; net): l^p norm of the mixed differences over the cyclic cells.
inline double vitali_sum(const Grid2& f, const Net& net, const Exponent& p) {
    detail::require_net(f, net);
    std::vector<double> terms;
    terms.reserve(net.rows.size() * net.cols.size());
    for (std::size_t a = 0; a < net.rows.size(); ++a) {
        for (std::size_t b = 0; b < net.cols.size(); ++b) {
            terms.push_back(abs_pow(
                detail::mixed_difference(f, net.rows[a], net.rows.next(a), net.cols[b], net.cols.next(b)),
                p.value()));
        }
    }
    return root_p(canonical_sum(terms), p.value());
}

/// Value on the all-indices net. Exact supremum for p = 1; a lower bound otherwise.
inline double vitali_finest(const Grid2& f, const Exponent& p) { return vitali_sum(f, Net::finest(f), p); }

inline constexpr std::size_t kVitaliOracleLimit = 7;

struct VitaliResult {
    double value = 0.0;
    Net net;
    bool converged = true;
    int sweeps = 0;
};

/// Exhaustive maximum over all (2^M - 1)(2^N - 1) nets.
inline VitaliResult vitali_oracle_net(const Grid2& f, const Exponent& p, std::size_t limit = kVitaliOracleLimit) {
    const std::size_t M = f.rows(), N = f.cols();
    if (M > limit || N > limit || M > kVitaliOracleLimit || N > kVitaliOracleLimit) {
        throw std::invalid_argument("vitali_oracle: grid too large");
    }
    const double pv = p.value();
    // term[(r0*M + r1) * N*N + c0*N + c1]
    std::vector<double> term(M * M * N * N);
    for (std::size_t r0 = 0; r0 < M; ++r0)
        for (std::size_t r1 = 0; r1 < M; ++r1)
            for (std::size_t c0 = 0; c0 < N; ++c0)
                for (std::size_t c1 = 0; c1 < N; ++c1)
                    term[(r0 * M + r1) * N * N + c0 * N + c1] =
                        abs_pow(detail::mixed_difference(f, r0, r1, c0, c1), pv);

    auto members = [](std::uint32_t mask, std::size_t n) {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (std::uint32_t{1} << k)) out.push_back(k);
        return out;
    };
    const std::uint32_t row_total = std::uint32_t{1} << M;
    const std::uint32_t col_total = std::uint32_t{1} << N;
    std::vector<std::vector<std::size_t>> col_sets(col_total);
    for (std::uint32_t cm = 1; cm < col_total; ++cm) col_sets[cm] = members(cm, N);

    struct Candidate {
        std::uint32_t rows, cols;
        double fast;
    };
    std::vector<Candidate> scanned;
    scanned.reserve(static_cast<std::size_t>(row_total) * col_total);
    std::vector<double> weight(N * N);
    double best_fast = 0.0;
    for (std::uint32_t rm = 1; rm < row_total; ++rm) {
        const auto rs = members(rm, M);
        std::fill(weight.begin(), weight.end(), 0.0);
        for (std::size_t a = 0; a < rs.size(); ++a) {
            const double* row_term = &term[(rs[a] * M + rs[(a + 1) % rs.size()]) * N * N];
            for (std::size_t q = 0; q < N * N; ++q) weight[q] += row_term[q];
        }
        for (std::uint32_t cm = 1; cm < col_total; ++cm) {
            const auto& cs = col_sets[cm];
            double s = 0.0;
            for (std::size_t b = 0; b < cs.size(); ++b) s += weight[cs[b] * N + cs[(b + 1) % cs.size()]];
            scanned.push_back({rm, cm, s});
            best_fast = std::max(best_fast, s);
        }
    }

    const double cutoff = best_fast * (1.0 - 1e-10);
    VitaliResult out;
    out.value = -1.0;
    for (const auto& c : scanned) {
        if (c.fast < cutoff) continue;
        Net net{CyclicPartition(members(c.rows, M), M), CyclicPartition(members(c.cols, N), N)};
        const double v = vitali_sum(f, net, p);
        if (v > out.value) {
            out.value = v;
            out.net = std::move(net);
        }
    }
    return out;
}

inline double vitali_oracle(const Grid2& f, const Exponent& p, std::size_t limit = kVitaliOracleLimit) {
    return vitali_oracle_net(f, p, limit).value;
}

namespace detail {

/// Holding the column chain fixed, the objective is a cyclic chain sum over
/// rows with pair cost sum_j |h_r'(j) - h_r(j)|^p, h_r the column-difference
/// profile of row r. Every anchor is tried; the anchor is the smallest row
/// of the chain.
inline std::vector<std::size_t> best_row_chain(const Grid2& f, const CyclicPartition& cols, double p,
                                               double* objective) {
    const std::size_t M = f.rows();
    const std::size_t n = cols.size();
    std::vector<double> profile(M * n);
    for (std::size_t r = 0; r < M; ++r)
        for (std::size_t j = 0; j < n; ++j) profile[r * n + j] = f(r, cols.next(j)) - f(r, cols[j]);

    std::vector<double> cost(M * M, 0.0);
    for (std::size_t a = 0; a < M; ++a) {
        for (std::size_t b = a + 1; b < M; ++b) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += abs_pow(profile[b * n + j] - profile[a * n + j], p);
            cost[a * M + b] = cost[b * M + a] = s;
        }
    }

    double best_value = -1.0;
    std::vector<std::size_t> best_chain;
    for (std::size_t anchor = 0; anchor < M; ++anchor) {
        const std::size_t m = M - anchor;
        double value = 0.0;
        auto chain = best_closed_chain(
            m, [&](std::size_t i, std::size_t j) { return cost[(anchor + i) * M + anchor + j]; }, &value);
        if (value > best_value || (value == best_value && chain.size() < best_chain.size())) {
            best_value = value;
            best_chain.clear();
            for (std::size_t pos : chain) best_chain.push_back(anchor + pos);
        }
    }
    if (objective) *objective = best_value;
    return best_chain;
}

inline double chain_objective(const Grid2& f, const Net& net, double p) {
    double s = 0.0;
    for (std::size_t a = 0; a < net.rows.size(); ++a)
        for (std::size_t b = 0; b < net.cols.size(); ++b)
            s += abs_pow(mixed_difference(f, net.rows[a], net.rows.next(a), net.cols[b], net.cols.next(b)), p);
    return s;
}

inline VitaliResult ascend_from(const Grid2& f, const Grid2& ft, Net net, const Exponent& p, int max_sweeps,
                                bool rows_first) {
    const double pv = p.value();
    double current = chain_objective(f, net, pv);
    int idle = 0;
    int sweeps = 0;
    bool optimize_rows = rows_first;
    // Converged once both coordinate blocks fail to improve in a row.
    while (sweeps < max_sweeps && idle < 2) {
        double objective = 0.0;
        if (optimize_rows) {
            auto rows = best_row_chain(f, net.cols, pv, &objective);
            if (objective > current * (1.0 + 1e-13) + 1e-300) {
                net.rows = CyclicPartition(std::move(rows), f.rows());
                current = chain_objective(f, net, pv);
                idle = 0;
            } else {
                ++idle;
            }
        } else {
            auto cols = best_row_chain(ft, net.rows, pv, &objective);
            if (objective > current * (1.0 + 1e-13) + 1e-300) {
                net.cols = CyclicPartition(std::move(cols), f.cols());
                current = chain_objective(f, net, pv);
                idle = 0;
            } else {
                ++idle;
            }
        }
        optimize_rows = !optimize_rows;
        ++sweeps;
    }
    VitaliResult out;
    out.value = vitali_sum(f, net, p);
    out.net = std::move(net);
    out.converged = idle >= 2;
    out.sweeps = sweeps;
    return out;
}

}  // namespace detail

namespace detail {

/// Two-line starts: for a pair of rows {a, b} the best columns are the
/// optimal 1D partition of the difference f(b, .) - f(a, .). The `count`
/// most promising pairs are returned, best first.
inline std::vector<Net> pair_starts(const Grid2& f, const Exponent& p, std::size_t count) {
    struct Scored {
        double value;
        std::size_t a, b;
        CyclicPartition cols;
    };
    const std::size_t M = f.rows(), N = f.cols();
    std::vector<Scored> all;
    std::vector<double> diff(N);
    for (std::size_t a = 0; a < M; ++a) {
        for (std::size_t b = a + 1; b < M; ++b) {
            for (std::size_t j = 0; j < N; ++j) diff[j] = f(b, j) - f(a, j);
            auto r = pvar_cyclic(Grid1(diff), p);
            all.push_back({r.value, a, b, std::move(r.partition)});
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Scored& x, const Scored& y) { return x.value > y.value; });
    std::vector<Net> out;
    for (std::size_t k = 0; k < std::min(count, all.size()); ++k) {
        out.push_back({CyclicPartition({all[k].a, all[k].b}, M), all[k].cols});
    }
    return out;
}

inline Net transpose_net(const Net& n) { return {n.cols, n.rows}; }

}  // namespace detail

inline constexpr std::size_t kAscentPairStarts = 16;

/// Alternating exact block maximisation over nets: with the column chain
/// fixed the best row chain is found by an all-anchor cyclic DP, then the
/// roles swap. Starts: the finest net (rows first and columns first), the
/// most promising two-row and two-column nets, and any extra nets supplied.
/// The result is the value of an explicit net, hence a certified lower bound
/// on the discrete supremum.
inline VitaliResult vitali_ascent(const Grid2& f, const Exponent& p, int max_sweeps = 50,
                                  const std::vector<Net>& extra_starts = {},
                                  std::size_t pair_count = kAscentPairStarts) {
    const Grid2 ft = f.transposed();
    std::vector<std::pair<Net, bool>> starts{{Net::finest(f), true}, {Net::finest(f), false}};
    for (const auto& s : extra_starts) {
        detail::require_net(f, s);
        starts.emplace_back(s, true);
        starts.emplace_back(s, false);
    }
    if (!p.is_one() && pair_count > 0) {
        // A two-row start already has optimal columns, so rows move first.
        for (auto& n : detail::pair_starts(f, p, pair_count)) starts.emplace_back(std::move(n), true);
        for (auto& n : detail::pair_starts(ft, p, pair_count)) starts.emplace_back(detail::transpose_net(n), false);
    }
    VitaliResult best;
    best.value = -1.0;
    for (auto& [net, rows_first] : starts) {
        auto r = detail::ascend_from(f, ft, net, p, max_sweeps, rows_first);
        if (r.value > best.value) best = std::move(r);
    }
    return best;
}

/// The offset net with rows at i/n and columns at (j + 1/2)/n.
inline Net staircase_offset_net(std::size_t size, std::size_t n) {
    if (n == 0 || size % (2 * n) != 0) {
        throw std::invalid_argument("staircase net: grid size must be a multiple of 2n");
    }
    std::vector<std::size_t> rows(n), cols(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i] = i * size / n;
        cols[i] = (2 * i + 1) * size / (2 * n);
    }
    return {CyclicPartition(std::move(rows), size), CyclicPartition(std::move(cols), size)};
}

/// Value of the staircase function on the offset net N_n; bounded below by n^(1/p).
inline double staircase_net_bound(const Grid2& staircase, std::size_t n, const Exponent& p) {
    if (staircase.rows() != staircase.cols()) throw std::invalid_argument("staircase grid must be square");
    return vitali_sum(staircase, staircase_offset_net(staircase.rows(), n), p);
}

inline double staircase_net_bound(std::size_t n, const Exponent& p, std::size_t size) {
    return staircase_net_bound(gen_staircase(static_cast<std::int64_t>(size)), n, p);
}

/// Best certified information about v_p^(2)(f) available at this size.
struct VitaliEstimate {
    double lower = 0.0;
    std::optional<double> upper;  // set only when the value is exact
    Net net;
    const char* method = "ascent";

    [[nodiscard]] bool exact() const noexcept { return upper.has_value(); }
};

inline VitaliEstimate vitali_certified(const Grid2& f, const Exponent& p,
                                       std::size_t oracle_limit = kVitaliOracleLimit,
                                       const std::vector<Net>& extra_starts = {}) {
    VitaliEstimate out;
    if (p.is_one()) {
        out.net = Net::finest(f);
        out.lower = vitali_sum(f, out.net, p);
        out.upper = out.lower;
        out.method = "finest";
        return out;
    }
    if (f.rows() <= oracle_limit && f.cols() <= oracle_limit && oracle_limit <= kVitaliOracleLimit) {
        auto r = vitali_oracle_net(f, p, oracle_limit);
        out.lower = r.value;
        out.upper = r.value;
        out.net = std::move(r.net);
        out.method = "oracle";
        return out;
    }
    auto r = vitali_ascent(f, p, 50, extra_starts);
    out.lower = r.value;
    out.net = std::move(r.net);
    return out;
}

/// Section bound v_p(f_x) <= v_p^(2)(f) + v_p(f_x0) for every row x.
///
/// The Vitali term is replaced by a certified lower value: the larger of the
/// best-known net value and 2^(1/p) max_x v_p(f_x - f_x0), which is the value
/// of the two-row net {x0, x}. A pass with a lower value implies a pass with
/// the true supremum. Without `reference_row`, the row of least variation is
/// used.
inline MarginReport hardy_section_check(const Grid2& f, const Exponent& p,
                                        std::optional<std::size_t> reference_row = std::nullopt,
                                        std::size_t oracle_limit = kVitaliOracleLimit) {
    const std::size_t M = f.rows();
    std::vector<double> section(M);
    for (std::size_t i = 0; i < M; ++i) section[i] = pvar(f.row(i), p);
    std::size_t x0 = 0;
    if (reference_row) {
        if (*reference_row >= M) throw std::invalid_argument("hardy_section_check: reference row out of range");
        x0 = *reference_row;
    } else {
        x0 = static_cast<std::size_t>(std::min_element(section.begin(), section.end()) - section.begin());
    }

    double two_row = 0.0;
    const Grid1 base = f.row(x0);
    for (std::size_t i = 0; i < M; ++i) {
        if (i == x0) continue;
        std::vector<double> diff(f.cols());
        for (std::size_t j = 0; j < f.cols(); ++j) diff[j] = f(i, j) - base[j];
        two_row = std::max(two_row, pvar(Grid1(std::move(diff)), p));
    }
    two_row *= std::pow(2.0, 1.0 / p.value());
    const double lower = std::max(two_row, vitali_certified(f, p, oracle_limit).lower);

    MarginReport report;
    report.id = "hardy_section";
    for (std::size_t i = 0; i < M; ++i) {
        report.add("x=" + std::to_string(i) + ",x0=" + std::to_string(x0), section[i], lower + section[x0]);
    }
    return report;
}

}  // namespace pvarlab
