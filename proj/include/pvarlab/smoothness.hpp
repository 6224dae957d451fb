#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pvarlab/check.hpp"
#include "pvarlab/grid.hpp"
#include "pvarlab/modulus.hpp"
#include "pvarlab/summation.hpp"

namespace pvarlab {

struct Domain {
    double u_min = 0.0, u_max = 1.0;
    double v_min = 0.0, v_max = 1.0;

    friend bool operator==(const Domain&, const Domain&) = default;
};

/// Certified interval for a truncated integral. `tail` is an optional
/// model-based estimate of the part below the truncation point; it is not
/// part of the certified interval.
struct Enclosure {
    double lo = 0.0;
    double hi = 0.0;
    Domain domain;
    double p = 1.0;
    std::optional<double> tail;

    [[nodiscard]] double width() const noexcept { return hi - lo; }
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

inline Enclosure operator+(const Enclosure& a, const Enclosure& b) {
    Enclosure out = a;
    out.lo = a.lo + b.lo;
    out.hi = a.hi + b.hi;
    if (a.tail && b.tail) {
        out.tail = *a.tail + *b.tail;
    } else {
        out.tail.reset();
    }
    return out;
}

struct Decomposition {
    Grid2 core;
    Grid1 marginal_x;  // phi_1
    Grid1 marginal_y;  // phi_2
};

/// f = core + phi_1(x) + phi_2(y), phi_1 the row means, phi_2 the column
/// means minus the grand mean. Every row and column mean of the core vanishes.
inline Decomposition decompose_lp0(const Grid2& f) {
    const std::size_t M = f.rows(), N = f.cols();
    std::vector<double> phi1(M), phi2(N);
    CompensatedSum grand;
    for (std::size_t i = 0; i < M; ++i) {
        phi1[i] = compensated_sum(f.row_span(i)) / static_cast<double>(N);
    }
    for (std::size_t j = 0; j < N; ++j) {
        CompensatedSum acc;
        for (std::size_t i = 0; i < M; ++i) acc.add(f(i, j));
        phi2[j] = acc.value() / static_cast<double>(M);
    }
    for (double v : f.data()) grand.add(v);
    const double mean = grand.value() / static_cast<double>(M * N);
    for (double& v : phi2) v -= mean;

    std::vector<double> core(M * N);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < N; ++j) core[i * N + j] = f(i, j) - phi1[i] - phi2[j];
    return {Grid2(M, N, std::move(core)), Grid1(std::move(phi1)), Grid1(std::move(phi2))};
}

namespace detail {

inline void require_singular_exponent(const Exponent& p) {
    if (p.is_one()) throw std::domain_error("p must exceed 1");
}

/// int_a^b t^(-1/p - 1) dt = p (a^(-1/p) - b^(-1/p)).
inline double weight(double a, double b, double p) { return p * (std::pow(a, -1.0 / p) - std::pow(b, -1.0 / p)); }

/// Endpoint-rule enclosure of int_{t_min}^1 t^(-1/p) w(t) dt/t for a
/// nondecreasing w sampled at t = k/K, t_min = min_index/K.
inline Enclosure enclose_1d(const ModulusTable1D& t, std::size_t min_index) {
    const std::size_t K = t.resolution();
    if (min_index < 1 || min_index > K) throw std::invalid_argument("integral: truncation index out of range");
    const double p = t.p;
    const double dk = static_cast<double>(K);
    CompensatedSum lo, hi;
    for (std::size_t k = min_index; k < K; ++k) {
        const double w = weight(static_cast<double>(k) / dk, static_cast<double>(k + 1) / dk, p);
        lo.add(w * t[k]);
        hi.add(w * t[k + 1]);
    }
    Enclosure e;
    e.lo = lo.value();
    e.hi = hi.value();
    e.p = p;
    const double t0 = static_cast<double>(min_index) / dk;
    e.domain = {t0, 1.0, 0.0, 0.0};
    // omega(t) ~ omega(t0) t / t0 below t0
    e.tail = (p / (p - 1.0)) * t[min_index] * std::pow(t0, -1.0 / p);
    return e;
}

}  // namespace detail

/// J_p over [min_index/K, 1].
inline Enclosure integral_J(const ModulusTable1D& table, std::size_t min_index = 1) {
    detail::require_singular_exponent(Exponent(table.p));
    return detail::enclose_1d(table, min_index);
}

/// K_p over [u_index/M, 1] for omega(t, 1) and [v_index/N, 1] for omega(1, t).
inline Enclosure integral_K(const ModulusTable2D& table, std::size_t u_index = 1, std::size_t v_index = 1) {
    detail::require_singular_exponent(Exponent(table.p));
    const Enclosure a = detail::enclose_1d(table.slice_u(), u_index);
    const Enclosure b = detail::enclose_1d(table.slice_v(), v_index);
    Enclosure out = a + b;
    out.domain = {a.domain.u_min, 1.0, b.domain.u_min, 1.0};
    return out;
}

/// I_p over [u_index/M, 1] x [v_index/N, 1], lower-left / upper-right corners.
inline Enclosure integral_I(const ModulusTable2D& table, std::size_t u_index = 1, std::size_t v_index = 1) {
    detail::require_singular_exponent(Exponent(table.p));
    const std::size_t M = table.rows, N = table.cols;
    if (u_index < 1 || u_index > M || v_index < 1 || v_index > N) {
        throw std::invalid_argument("integral: truncation index out of range");
    }
    const double p = table.p;
    const double dm = static_cast<double>(M), dn = static_cast<double>(N);
    std::vector<double> wu(M, 0.0), wv(N, 0.0);
    for (std::size_t k = u_index; k < M; ++k)
        wu[k] = detail::weight(static_cast<double>(k) / dm, static_cast<double>(k + 1) / dm, p);
    for (std::size_t l = v_index; l < N; ++l)
        wv[l] = detail::weight(static_cast<double>(l) / dn, static_cast<double>(l + 1) / dn, p);
    CompensatedSum lo, hi;
    for (std::size_t k = u_index; k < M; ++k) {
        for (std::size_t l = v_index; l < N; ++l) {
            const double w = wu[k] * wv[l];
            lo.add(w * table(k, l));
            hi.add(w * table(k + 1, l + 1));
        }
    }
    Enclosure e;
    e.lo = lo.value();
    e.hi = hi.value();
    e.p = p;
    const double u0 = static_cast<double>(u_index) / dm, v0 = static_cast<double>(v_index) / dn;
    e.domain = {u0, 1.0, v0, 1.0};
    // Tail model omega(u, v) ~ omega(u0, v0) (u/u0)(v/v0) on the part of the
    // unit square outside the truncated rectangle.
    const double pc = p / (p - 1.0);
    const double full_u = pc;  // int_0^1 u^(-1/p) du
    const double full_v = pc;
    const double trunc_u = pc * (1.0 - std::pow(u0, 1.0 - 1.0 / p));
    const double trunc_v = pc * (1.0 - std::pow(v0, 1.0 - 1.0 / p));
    e.tail = table(u_index, v_index) / (u0 * v0) * (full_u * full_v - trunc_u * trunc_v);
    return e;
}

/// K_p <= (4/p') I_p, omega(1,1)_p <= (4/p'^2) I_p and, for the decomposed
/// core, J_p <= 3 K_p. Left sides use enclosure lower ends, right sides the
/// upper ends, all over one truncation domain.
inline MarginReport chain_check(const Grid2& f, const Exponent& p, bool cap_override = false) {
    detail::require_singular_exponent(p);
    const double pc = p.conj();
    MarginReport r;
    r.id = "integral_chain";

    const auto table = modulus_mixed(f, p, cap_override);
    const Enclosure K = integral_K(table);
    const Enclosure I = integral_I(table);
    r.add("K<=4/p'*I", K.lo, 4.0 / pc * I.hi);
    r.add("w(1,1)<=4/p'^2*I", table(table.rows, table.cols), 4.0 / (pc * pc) * I.hi);

    const Decomposition d = decompose_lp0(f);
    const auto core_table = modulus_mixed(d.core, p, cap_override);
    const auto iso = modulus_iso_2d(d.core, p);
    // Common domain [t0, 1], t0 = 1/min(M, N): J starts at or after t0 and
    // both K slices start at or before it.
    const std::size_t M = f.rows(), N = f.cols();
    const std::size_t small = std::min(M, N);
    const std::size_t Kiso = iso.resolution();
    const Enclosure J = integral_J(iso, (Kiso + small - 1) / small);
    const Enclosure Kc = integral_K(core_table, std::max<std::size_t>(1, M / small), std::max<std::size_t>(1, N / small));
    r.add("J(core)<=3K(core)", J.lo, 3.0 * Kc.hi);
    return r;
}

}  // namespace pvarlab
