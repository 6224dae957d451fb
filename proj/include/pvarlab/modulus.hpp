#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pvarlab/check.hpp"
#include "pvarlab/grid.hpp"
#include "pvarlab/io.hpp"
#include "pvarlab/pvar1d.hpp"
#include "pvarlab/summation.hpp"

namespace pvarlab {

inline double lp_norm(std::span<const double> values, const Exponent& p) {
    if (values.empty()) return 0.0;
    CompensatedSum acc;
    for (double v : values) acc.add(abs_pow(v, p.value()));
    return root_p(acc.value() / static_cast<double>(values.size()), p.value());
}

inline double lp_norm(const Grid1& g, const Exponent& p) { return lp_norm(g.samples(), p); }
inline double lp_norm(const Grid2& f, const Exponent& p) { return lp_norm(f.data(), p); }

inline double sup_norm(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

inline double sup_norm(const Grid1& g) { return sup_norm(g.samples()); }
inline double sup_norm(const Grid2& f) { return sup_norm(f.data()); }

/// ||g(. + k/N) - g||_p for k = 0..N-1.
inline std::vector<double> shift_norms_1d(const Grid1& g, const Exponent& p) {
    const std::size_t N = g.size();
    const double pv = p.value();
    std::vector<double> out(N, 0.0);
    for (std::size_t k = 1; k < N; ++k) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < N; ++i) acc.add(abs_pow(g[(i + k) % N] - g[i], pv));
        out[k] = root_p(acc.value() / static_cast<double>(N), pv);
    }
    return out;
}

/// omega(delta)_p sampled at delta = k / resolution, k = 0..resolution.
struct ModulusTable1D {
    std::vector<double> values;
    double p = 1.0;

    [[nodiscard]] std::size_t resolution() const noexcept { return values.empty() ? 0 : values.size() - 1; }
    [[nodiscard]] double operator[](std::size_t k) const noexcept { return values[k]; }
    [[nodiscard]] double argument(std::size_t k) const noexcept {
        return static_cast<double>(k) / static_cast<double>(resolution());
    }
};

/// omega(u, v)_p at u = k/M, v = l/N; (M+1) x (N+1), row-major.
struct ModulusTable2D {
    std::size_t rows = 0;  // M
    std::size_t cols = 0;  // N
    std::vector<double> values;
    double p = 1.0;

    [[nodiscard]] double operator()(std::size_t k, std::size_t l) const noexcept { return values[k * (cols + 1) + l]; }
    double& at(std::size_t k, std::size_t l) noexcept { return values[k * (cols + 1) + l]; }

    [[nodiscard]] ModulusTable1D slice_u() const {  // omega(t, 1)
        ModulusTable1D t{std::vector<double>(rows + 1), p};
        for (std::size_t k = 0; k <= rows; ++k) t.values[k] = (*this)(k, cols);
        return t;
    }
    [[nodiscard]] ModulusTable1D slice_v() const {  // omega(1, t)
        ModulusTable1D t{std::vector<double>(cols + 1), p};
        for (std::size_t l = 0; l <= cols; ++l) t.values[l] = (*this)(rows, l);
        return t;
    }
};

/// ||Delta(s/M, t/N) f||_p with doubly circular shifts.
inline double mixed_diff_norm(const Grid2& f, std::size_t s, std::size_t t, const Exponent& p) {
    const std::size_t M = f.rows(), N = f.cols();
    if (s > M || t > N) throw std::invalid_argument("mixed_diff_norm: shift out of range");
    s %= M;
    t %= N;
    if (s == 0 || t == 0) return 0.0;
    const double pv = p.value();
    CompensatedSum acc;
    for (std::size_t i = 0; i < M; ++i) {
        const std::size_t is = (i + s) % M;
        for (std::size_t j = 0; j < N; ++j) {
            const std::size_t jt = (j + t) % N;
            acc.add(abs_pow((f(is, jt) - f(is, j)) - (f(i, jt) - f(i, j)), pv));
        }
    }
    return root_p(acc.value() / static_cast<double>(M * N), pv);
}

namespace detail {

inline ModulusTable1D prefix_max(const std::vector<double>& shift_norm, double p) {
    const std::size_t N = shift_norm.size();
    ModulusTable1D t{std::vector<double>(N + 1, 0.0), p};
    for (std::size_t k = 1; k <= N; ++k) t.values[k] = std::max(t.values[k - 1], shift_norm[k % N]);
    return t;
}

}  // namespace detail

/// Shift norms are symmetric under k -> N - k, so the prefix maximum over
/// 0..k is the supremum over |h| <= k/N.
inline ModulusTable1D modulus_1d(const Grid1& g, const Exponent& p) {
    return detail::prefix_max(shift_norms_1d(g, p), p.value());
}

/// Isotropic modulus of a 2D grid over the sup-norm ball of shifts. Level k
/// stands for delta = k/K with K = max(M, N); the shift (a/M, b/N) is inside
/// the ball when both circular distances are at most delta.
inline ModulusTable1D modulus_iso_2d(const Grid2& f, const Exponent& p) {
    const std::size_t M = f.rows(), N = f.cols();
    const std::size_t K = std::max(M, N);
    const double pv = p.value();
    std::vector<double> level_max(K + 1, 0.0);
    for (std::size_t a = 0; a < M; ++a) {
        const std::size_t da = std::min(a, M - a);
        for (std::size_t b = 0; b < N; ++b) {
            if (a == 0 && b == 0) continue;
            const std::size_t db = std::min(b, N - b);
            CompensatedSum acc;
            for (std::size_t i = 0; i < M; ++i) {
                const std::size_t ia = (i + a) % M;
                for (std::size_t j = 0; j < N; ++j) acc.add(abs_pow(f(ia, (j + b) % N) - f(i, j), pv));
            }
            const double norm = root_p(acc.value() / static_cast<double>(M * N), pv);
            // smallest k with da*K <= k*M and db*K <= k*N
            const std::size_t ka = (da * K + M - 1) / M;
            const std::size_t kb = (db * K + N - 1) / N;
            auto& slot = level_max[std::max(ka, kb)];
            slot = std::max(slot, norm);
        }
    }
    ModulusTable1D t{std::vector<double>(K + 1, 0.0), pv};
    for (std::size_t k = 1; k <= K; ++k) t.values[k] = std::max(t.values[k - 1], level_max[k]);
    return t;
}

inline constexpr std::size_t kMixedTableCap = 128;

/// Mixed modulus table from the full shift table. O((MN)^2) work, so grids
/// beyond 128 x 128 need `cap_override`.
inline ModulusTable2D modulus_mixed(const Grid2& f, const Exponent& p, bool cap_override = false) {
    const std::size_t M = f.rows(), N = f.cols();
    if (!cap_override && (M > kMixedTableCap || N > kMixedTableCap)) {
        throw std::invalid_argument("modulus_mixed: grid exceeds " + std::to_string(kMixedTableCap) + "x" +
                                    std::to_string(kMixedTableCap) + " (use the cap override)");
    }
    const double pv = p.value();
    std::vector<double> shift(M * N, 0.0);
    std::vector<double> d(M * N);
    for (std::size_t s = 1; s < M; ++s) {
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t j = 0; j < N; ++j) d[i * N + j] = f((i + s) % M, j) - f(i, j);
        for (std::size_t t = 1; t < N; ++t) {
            CompensatedSum acc;
            for (std::size_t i = 0; i < M; ++i) {
                const double* row = &d[i * N];
                double r = 0.0;
                for (std::size_t j = 0; j + t < N; ++j) r += abs_pow(row[j + t] - row[j], pv);
                for (std::size_t j = N - t; j < N; ++j) r += abs_pow(row[j + t - N] - row[j], pv);
                acc.add(r);
            }
            shift[s * N + t] = root_p(acc.value() / static_cast<double>(M * N), pv);
        }
    }
    ModulusTable2D table{M, N, std::vector<double>((M + 1) * (N + 1), 0.0), pv};
    for (std::size_t k = 1; k <= M; ++k) {
        for (std::size_t l = 1; l <= N; ++l) {
            table.at(k, l) = std::max({table(k - 1, l), table(k, l - 1), shift[(k % M) * N + (l % N)]});
        }
    }
    return table;
}

inline void write_table_csv(std::ostream& out, const ModulusTable1D& t) {
    out << "k,delta,value\n";
    for (std::size_t k = 0; k < t.values.size(); ++k)
        out << k << ',' << format_double(t.argument(k)) << ',' << format_double(t[k]) << '\n';
}

inline void write_table_csv(std::ostream& out, const ModulusTable2D& t) {
    out << "k,l,value\n";
    for (std::size_t k = 0; k <= t.rows; ++k)
        for (std::size_t l = 0; l <= t.cols; ++l) out << k << ',' << l << ',' << format_double(t(k, l)) << '\n';
}

// ---------------------------------------------------------------------------
// Invariant checks

/// Monotonicity and, when `doubling` is set, omega(2 delta) <= 2 omega(delta)
/// and omega(d1)/d1 <= 2 omega(d2)/d2 for d2 <= d1.
inline MarginReport table_invariants_check(const ModulusTable1D& t, bool doubling = true) {
    MarginReport r;
    r.id = "modulus_1d_invariants";
    const std::size_t K = t.resolution();
    r.add("k=0", t[0], 0.0);
    for (std::size_t k = 1; k <= K; ++k) r.add("monotone k=" + std::to_string(k), t[k - 1], t[k]);
    if (!doubling) return r;
    for (std::size_t k = 1; 2 * k <= K; ++k) r.add("doubling k=" + std::to_string(k), t[2 * k], 2.0 * t[k]);
    // Only the binding k2 (smallest right side) is recorded for each k1.
    double tightest = std::numeric_limits<double>::infinity();
    for (std::size_t k1 = 1; k1 <= K; ++k1) {
        tightest = std::min(tightest, 2.0 * t[k1] / t.argument(k1));
        r.add("ratio k1=" + std::to_string(k1), t[k1] / t.argument(k1), tightest);
    }
    return r;
}

inline MarginReport table_invariants_check(const ModulusTable2D& t) {
    MarginReport r;
    r.id = "modulus_mixed_invariants";
    const std::size_t M = t.rows, N = t.cols;
    for (std::size_t k = 0; k <= M; ++k) r.add("zero l=0", std::abs(t(k, 0)), 0.0);
    for (std::size_t l = 0; l <= N; ++l) r.add("zero k=0", std::abs(t(0, l)), 0.0);
    auto tag = [](const char* what, std::size_t a, std::size_t b) {
        return std::string(what) + " " + std::to_string(a) + "," + std::to_string(b);
    };
    for (std::size_t k = 1; k <= M; ++k) {
        for (std::size_t l = 1; l <= N; ++l) {
            r.add(tag("monotone_u", k, l), t(k - 1, l), t(k, l));
            r.add(tag("monotone_v", k, l), t(k, l - 1), t(k, l));
            if (2 * k <= M) r.add(tag("doubling_u", k, l), t(2 * k, l), 2.0 * t(k, l));
            if (2 * l <= N) r.add(tag("doubling_v", k, l), t(k, 2 * l), 2.0 * t(k, l));
        }
    }
    const double dm = static_cast<double>(M), dn = static_cast<double>(N);
    for (std::size_t l = 1; l <= N; ++l) {
        double tightest = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k <= M; ++k) {
            const double ratio = t(k, l) * dm / static_cast<double>(k);
            tightest = std::min(tightest, 2.0 * ratio);
            r.add(tag("ratio_u", k, l), ratio, tightest);
        }
    }
    for (std::size_t k = 1; k <= M; ++k) {
        double tightest = std::numeric_limits<double>::infinity();
        for (std::size_t l = 1; l <= N; ++l) {
            const double ratio = t(k, l) * dn / static_cast<double>(l);
            tightest = std::min(tightest, 2.0 * ratio);
            r.add(tag("ratio_v", k, l), ratio, tightest);
        }
    }
    return r;
}

/// omega(delta) <= (3/delta) int_0^delta ||Delta(t) g||_p dt at every grid
/// delta, the integral by the trapezoid rule on the shift grid.
inline MarginReport averaged_modulus_check(const Grid1& g, const Exponent& p) {
    const auto norms = shift_norms_1d(g, p);
    const auto table = detail::prefix_max(norms, p.value());
    const std::size_t N = g.size();
    MarginReport r;
    r.id = "averaged_modulus";
    double integral = 0.0;
    for (std::size_t k = 1; k <= N; ++k) {
        integral += 0.5 * (norms[k - 1] + norms[k % N]) / static_cast<double>(N);
        const double delta = static_cast<double>(k) / static_cast<double>(N);
        r.add("k=" + std::to_string(k), table[k], 3.0 / delta * integral);
    }
    return r;
}

/// Omega_p(g) <= omega(g; 1)_p <= 2 Omega_p(g).
inline MarginReport omega_sandwich_check(const Grid1& g, const Exponent& p) {
    const double big = omega_p_functional(g, p);
    const double w1 = modulus_1d(g, p).values.back();
    MarginReport r;
    r.id = "omega_sandwich";
    r.add("lower", big, w1);
    r.add("upper", w1, 2.0 * big);
    return r;
}

namespace detail {

inline Grid2 row_shift_difference(const Grid2& f, std::size_t h) {
    const std::size_t M = f.rows(), N = f.cols();
    std::vector<double> out(M * N);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < N; ++j) out[i * N + j] = f((i + h) % M, j) - f(i, j);
    return Grid2(M, N, std::move(out));
}

}  // namespace detail

/// omega(Delta_1(h) f; u, v)_p <= 2 min{omega(f; u, v)_p, omega(f; h, v)_p}
/// entrywise; on square grids also the isotropic form with delta.
inline MarginReport diff_modulus_bound_check(const Grid2& f, std::size_t h, const Exponent& p,
                                             bool cap_override = false) {
    if (h > f.rows()) throw std::invalid_argument("diff_modulus_bound_check: shift out of range");
    const Grid2 dh = detail::row_shift_difference(f, h % f.rows());
    const auto tf = modulus_mixed(f, p, cap_override);
    const auto td = modulus_mixed(dh, p, cap_override);
    MarginReport r;
    r.id = "diff_modulus_bound";
    for (std::size_t k = 0; k <= tf.rows; ++k)
        for (std::size_t l = 0; l <= tf.cols; ++l)
            r.add("mixed h=" + std::to_string(h) + " " + std::to_string(k) + "," + std::to_string(l), td(k, l),
                  2.0 * std::min(tf(k, l), tf(h, l)));
    if (f.rows() == f.cols()) {
        const auto iso_f = modulus_iso_2d(f, p);
        const auto iso_d = modulus_iso_2d(dh, p);
        for (std::size_t k = 0; k <= iso_f.resolution(); ++k)
            r.add("iso h=" + std::to_string(h) + " k=" + std::to_string(k), iso_d[k],
                  2.0 * std::min(iso_f[k], iso_f[h]));
    }
    return r;
}

/// One-variable form: omega(Delta(h) g; delta) <= 2 min{omega(g; delta), omega(g; h)}.
inline MarginReport diff_modulus_bound_check(const Grid1& g, std::size_t h, const Exponent& p) {
    const std::size_t N = g.size();
    if (h > N) throw std::invalid_argument("diff_modulus_bound_check: shift out of range");
    std::vector<double> d(N);
    for (std::size_t i = 0; i < N; ++i) d[i] = g[(i + h) % N] - g[i];
    const auto tg = modulus_1d(g, p);
    const auto td = modulus_1d(Grid1(std::move(d)), p);
    MarginReport r;
    r.id = "diff_modulus_bound_1d";
    for (std::size_t k = 0; k <= N; ++k)
        r.add("h=" + std::to_string(h) + " k=" + std::to_string(k), td[k], 2.0 * std::min(tg[k], tg[h]));
    return r;
}

/// omega(f; u, v)_p <= v_p^(2)(f) u^(1/p) v^(1/p) with a certified upper
/// value for v_p^(2).
inline MarginReport golubov_modulus_check(const ModulusTable2D& t, double vitali_upper) {
    MarginReport r;
    r.id = "modulus_vs_variation";
    const double ip = 1.0 / t.p;
    for (std::size_t k = 0; k <= t.rows; ++k) {
        for (std::size_t l = 0; l <= t.cols; ++l) {
            const double u = static_cast<double>(k) / static_cast<double>(t.rows);
            const double v = static_cast<double>(l) / static_cast<double>(t.cols);
            r.add(std::to_string(k) + "," + std::to_string(l), t(k, l),
                  vitali_upper * std::pow(u, ip) * std::pow(v, ip));
        }
    }
    return r;
}

}  // namespace pvarlab
