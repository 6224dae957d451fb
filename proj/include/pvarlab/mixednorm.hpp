#pragma once

#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "pvarlab/check.hpp"
#include "pvarlab/grid.hpp"
#include "pvarlab/io.hpp"
#include "pvarlab/modulus.hpp"
#include "pvarlab/pvar1d.hpp"
#include "pvarlab/smoothness.hpp"

namespace pvarlab {

enum class Axis { x, y };

/// k-th sample is v_p of the k-th x-section (rows) or y-section (columns).
struct SectionProfile {
    Grid1 values;
    Axis axis = Axis::x;
    double p = 1.0;
};

inline SectionProfile phi_profile(const Grid2& f, const Exponent& p) {
    std::vector<double> v(f.rows());
    for (std::size_t i = 0; i < f.rows(); ++i) v[i] = pvar(f.row(i), p);
    return {Grid1(std::move(v)), Axis::x, p.value()};
}

inline SectionProfile psi_profile(const Grid2& f, const Exponent& p) {
    std::vector<double> v(f.cols());
    for (std::size_t j = 0; j < f.cols(); ++j) v[j] = pvar(f.col(j), p);
    return {Grid1(std::move(v)), Axis::y, p.value()};
}

/// W_p(f) = v_p(phi_p[f]) + v_p(psi_p[f]).
inline double W_p(const Grid2& f, const Exponent& p) {
    return pvar(phi_profile(f, p).values, p) + pvar(psi_profile(f, p).values, p);
}

/// |v_p(f_x'') - v_p(f_x')| <= 2 v_p(f_x'' - f_x') for every pair of rows.
inline MarginReport section_lipschitz_check(const Grid2& f, const Exponent& p) {
    const auto phi = phi_profile(f, p);
    const std::size_t M = f.rows(), N = f.cols();
    MarginReport r;
    r.id = "section_lipschitz";
    std::vector<double> g(N);
    for (std::size_t a = 0; a < M; ++a) {
        for (std::size_t b = a + 1; b < M; ++b) {
            for (std::size_t j = 0; j < N; ++j) g[j] = f(b, j) - f(a, j);
            r.add(std::to_string(a) + "," + std::to_string(b), std::abs(phi.values[b] - phi.values[a]),
                  2.0 * pvar(Grid1(g), p));
        }
    }
    return r;
}

/// Bracket omega(1,1)_p + K_p/(pp') + I_p/(pp')^2 from enclosure upper ends.
struct Bracket {
    double omega11 = 0.0;
    double k_term = 0.0;
    double i_term = 0.0;

    [[nodiscard]] double total() const noexcept { return omega11 + k_term + i_term; }
};

inline Bracket smoothness_bracket(const ModulusTable2D& table) {
    const Exponent p(table.p);
    const double c = p.inv_p_pconj();
    Bracket b;
    b.omega11 = table(table.rows, table.cols);
    b.k_term = c * integral_K(table).hi;
    b.i_term = c * c * integral_I(table).hi;
    return b;
}

struct WpEstimate {
    double wp = 0.0;
    Bracket bracket;
    MeasuredConstant constant;
};

/// A_obs = W_p(core) / bracket(f). The bracket is invariant under adding
/// marginals, so it is evaluated on the core as well.
inline WpEstimate W_p_estimate_check(const Grid2& f, const Exponent& p, bool cap_override = false) {
    detail::require_singular_exponent(p);
    const Grid2 core = decompose_lp0(f).core;
    WpEstimate out;
    out.wp = W_p(core, p);
    out.bracket = smoothness_bracket(modulus_mixed(core, p, cap_override));
    out.constant = MeasuredConstant::of(out.wp, out.bracket.total());
    return out;
}

inline void write_profile_csv(std::ostream& out, const SectionProfile& s) {
    out << (s.axis == Axis::x ? "x" : "y") << ",value\n";
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        out << format_double(static_cast<double>(k) / static_cast<double>(s.values.size())) << ','
            << format_double(s.values[k]) << '\n';
    }
}

}  // namespace pvarlab
