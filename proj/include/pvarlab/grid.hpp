#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pvarlab {

/// Variation / integrability index p >= 1 together with its conjugate.
class Exponent {
public:
    explicit Exponent(double p) : p_(p) {
        if (!std::isfinite(p) || p < 1.0) {
            throw std::invalid_argument("exponent must be a finite real >= 1, got " +
                                        std::to_string(p));
        }
    }

    [[nodiscard]] double value() const noexcept { return p_; }

    /// p' = p/(p-1); +inf when p == 1.
    [[nodiscard]] double conj() const noexcept {
        return p_ == 1.0 ? std::numeric_limits<double>::infinity() : p_ / (p_ - 1.0);
    }

    /// 1/p' = 1 - 1/p (zero when p == 1).
    [[nodiscard]] double inv_conj() const noexcept { return 1.0 - 1.0 / p_; }

    /// The coefficient 1/(p p') that appears in front of the singular integrals.
    [[nodiscard]] double inv_p_pconj() const noexcept { return inv_conj() / p_; }

    [[nodiscard]] bool is_one() const noexcept { return p_ == 1.0; }

private:
    double p_;
};

namespace detail {

inline void require_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("grid samples must be finite");
    }
}

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
    const std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

}  // namespace detail

/// Uniformly sampled 1-periodic function: samples[k] is the value at x = k/N.
class Grid1 {
public:
    Grid1() = default;

    explicit Grid1(std::vector<double> samples) : samples_(std::move(samples)) {
        if (samples_.size() < 2) throw std::invalid_argument("Grid1 needs at least 2 samples");
        detail::require_finite(samples_);
    }

    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] double step() const noexcept { return 1.0 / static_cast<double>(size()); }
    [[nodiscard]] double operator[](std::size_t k) const noexcept { return samples_[k]; }

    /// Periodic access: any integer index, reduced modulo N.
    [[nodiscard]] double cyclic(std::int64_t k) const noexcept {
        return samples_[static_cast<std::size_t>(
            detail::mod(k, static_cast<std::int64_t>(samples_.size())))];
    }

    [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }

    friend bool operator==(const Grid1&, const Grid1&) = default;

private:
    std::vector<double> samples_;
};

/// Doubly periodic M x N sample matrix; entry (i, j) is the value at (i/M, j/N).
/// Storage is row-major.
class Grid2 {
public:
    Grid2() = default;

    Grid2(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (rows_ < 2 || cols_ < 2) throw std::invalid_argument("Grid2 needs at least 2x2 samples");
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("Grid2 data size does not match dimensions");
        }
        detail::require_finite(data_);
    }

    static Grid2 zeros(std::size_t rows, std::size_t cols) {
        return Grid2(rows, cols, std::vector<double>(rows * cols, 0.0));
    }

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
        return data_[i * cols_ + j];
    }

    [[nodiscard]] double cyclic(std::int64_t i, std::int64_t j) const noexcept {
        const auto r = static_cast<std::size_t>(detail::mod(i, static_cast<std::int64_t>(rows_)));
        const auto c = static_cast<std::size_t>(detail::mod(j, static_cast<std::int64_t>(cols_)));
        return data_[r * cols_ + c];
    }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }

    [[nodiscard]] std::span<const double> row_span(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * cols_, cols_);
    }

    /// x-section f_x: the function of y obtained by freezing row i.
    [[nodiscard]] Grid1 row(std::size_t i) const {
        auto r = row_span(i);
        return Grid1(std::vector<double>(r.begin(), r.end()));
    }

    /// y-section f_y: the function of x obtained by freezing column j.
    [[nodiscard]] Grid1 col(std::size_t j) const {
        std::vector<double> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return Grid1(std::move(c));
    }

    [[nodiscard]] Grid2 transposed() const {
        std::vector<double> t(data_.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t[j * rows_ + i] = (*this)(i, j);
        return Grid2(cols_, rows_, std::move(t));
    }

    friend bool operator==(const Grid2&, const Grid2&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Grid1 make_grid1(std::vector<double> values) { return Grid1(std::move(values)); }

// ---------------------------------------------------------------------------
// Closed-form evaluation at rational points. Arguments are kept as integer
// fractions so that breakpoints and extrema land on grid points exactly.

/// Distance from num/den to the nearest integer.
inline double dist_to_integer(std::int64_t num, std::int64_t den) {
    const std::int64_t r = detail::mod(num, den);
    return static_cast<double>(std::min(r, den - r)) / static_cast<double>(den);
}

/// sin(2 pi num/den), exact at multiples of a quarter period and symmetric
/// under the reflections of the circle.
inline double sin_2pi_frac(std::int64_t num, std::int64_t den) {
    std::int64_t r = detail::mod(num, den);
    double sign = 1.0;
    if (2 * r > den) {  // sin(2pi(1 - x)) = -sin(2pi x)
        r = den - r;
        sign = -1.0;
    }
    if (r == 0 || 2 * r == den) return 0.0;
    if (4 * r == den) return sign;
    // Reflect about the quarter period: sin(2pi(1/2 - x)) = sin(2pi x).
    if (4 * r > den) {
        const std::int64_t reflected = den - 2 * r;  // 2 * (1/2 - x) * den
        return sign * std::sin(std::numbers::pi * static_cast<double>(reflected) /
                               static_cast<double>(den));
    }
    return sign * std::sin(2.0 * std::numbers::pi * static_cast<double>(r) /
                           static_cast<double>(den));
}

inline double cos_2pi_frac(std::int64_t num, std::int64_t den) {
    return sin_2pi_frac(4 * num + den, 4 * den);
}

// ---------------------------------------------------------------------------
// Generators

/// phi_n(x) = phi(n x), phi the distance to the nearest integer.
inline Grid1 gen_tent_scaled(std::int64_t n, std::int64_t size) {
    if (n < 1 || size < 2) throw std::invalid_argument("gen_tent_scaled: n >= 1 and N >= 2 required");
    if (size % (2 * n) != 0) {
        throw std::invalid_argument("gen_tent_scaled: N must be a multiple of 2n");
    }
    std::vector<double> s(static_cast<std::size_t>(size));
    for (std::int64_t k = 0; k < size; ++k) s[static_cast<std::size_t>(k)] = dist_to_integer(n * k, size);
    return Grid1(std::move(s));
}

/// t_n(x) = sin(2 pi n x).
inline Grid1 gen_sine(std::int64_t n, std::int64_t size) {
    if (n < 1 || size < 2) throw std::invalid_argument("gen_sine: n >= 1 and N >= 2 required");
    if (size % (4 * n) != 0) throw std::invalid_argument("gen_sine: N must be a multiple of 4n");
    std::vector<double> s(static_cast<std::size_t>(size));
    for (std::int64_t k = 0; k < size; ++k) s[static_cast<std::size_t>(k)] = sin_2pi_frac(n * k, size);
    return Grid1(std::move(s));
}

/// g_n(x) = phi(2^n x - 1) on [2^-n, 2^-n+1], zero elsewhere in the period.
inline double gn_value(int n, std::int64_t k, std::int64_t size) {
    // 2^n k/N - 1 = (2^n k - N)/N, restricted to x in [0, 1).
    const std::int64_t a = (std::int64_t{1} << n) * k - size;
    if (a < 0 || a > size) return 0.0;
    return static_cast<double>(std::min(a, size - a)) / static_cast<double>(size);
}

inline Grid1 gen_gn(int n, std::int64_t size) {
    if (n < 1 || n > 40 || size < 2) throw std::invalid_argument("gen_gn: 1 <= n <= 40 and N >= 2 required");
    if (size % (std::int64_t{1} << (n + 1)) != 0) {
        throw std::invalid_argument("gen_gn: N must be a multiple of 2^(n+1)");
    }
    std::vector<double> s(static_cast<std::size_t>(size));
    for (std::int64_t k = 0; k < size; ++k) s[static_cast<std::size_t>(k)] = gn_value(n, k, size);
    return Grid1(std::move(s));
}

struct SeriesGrid {
    Grid2 grid;
    int truncation = 0;
    double p = 1.0;
    /// Sup-norm bound on the discarded tail, 2^(-M/p) / 4.
    double tail_bound = 0.0;
};

/// Truncation at M terms of f(x,y) = sum_n 2^(-n/p) g_n(x) phi(2^n y) on an
/// N x N grid.
inline SeriesGrid gen_series_f(int terms, const Exponent& p, std::int64_t size) {
    if (terms < 1 || terms > 40 || size < 2) {
        throw std::invalid_argument("gen_series_f: 1 <= M <= 40 and N >= 2 required");
    }
    const std::int64_t align = std::int64_t{1} << (terms + 1);
    if (align > size) throw std::invalid_argument("gen_series_f: 2^(M+1) exceeds N");
    if (size % align != 0) throw std::invalid_argument("gen_series_f: N must be a multiple of 2^(M+1)");

    const auto n = static_cast<std::size_t>(size);
    std::vector<double> data(n * n, 0.0);
    for (int t = 1; t <= terms; ++t) {
        const double weight = std::pow(2.0, -static_cast<double>(t) / p.value());
        const std::int64_t freq = std::int64_t{1} << t;
        for (std::int64_t i = 0; i < size; ++i) {
            const double gx = gn_value(t, i, size);
            if (gx == 0.0) continue;
            for (std::int64_t j = 0; j < size; ++j) {
                data[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] +=
                    weight * gx * dist_to_integer(freq * j, size);
            }
        }
    }
    SeriesGrid out;
    out.grid = Grid2(n, n, std::move(data));
    out.truncation = terms;
    out.p = p.value();
    out.tail_bound = std::pow(2.0, -static_cast<double>(terms) / p.value()) * 0.25;
    return out;
}

/// Indicator of 0 < x <= y <= 1, with grid index 0 standing for the point 1.
inline Grid2 gen_staircase(std::int64_t size) {
    if (size < 2) throw std::invalid_argument("gen_staircase: N >= 2 required");
    const auto n = static_cast<std::size_t>(size);
    auto rep = [n](std::size_t k) { return k == 0 ? n : k; };
    std::vector<double> data(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) data[i * n + j] = rep(i) <= rep(j) ? 1.0 : 0.0;
    return Grid2(n, n, std::move(data));
}

/// Tensor product (g ⊗ h)(i, j) = g[i] h[j].
inline Grid2 gen_product(const Grid1& g, const Grid1& h) {
    std::vector<double> data(g.size() * h.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) data[i * h.size() + j] = g[i] * h[j];
    return Grid2(g.size(), h.size(), std::move(data));
}

/// Coefficients of a bivariate trigonometric polynomial of degree (n, m):
///   T = sum_{j<=n, k<=m} a cos cos + b cos sin + c sin cos + d sin sin
/// with arguments 2 pi j x and 2 pi k y. Matrices are (n+1) x (m+1), row-major.
struct TrigCoefficients {
    int degree_x = 0;
    int degree_y = 0;
    std::vector<double> a, b, c, d;

    TrigCoefficients() = default;
    TrigCoefficients(int n, int m)
        : degree_x(n), degree_y(m),
          a(static_cast<std::size_t>((n + 1) * (m + 1)), 0.0), b(a), c(a), d(a) {
        if (n < 0 || m < 0) throw std::invalid_argument("TrigCoefficients: negative degree");
    }

    [[nodiscard]] std::size_t index(int j, int k) const {
        return static_cast<std::size_t>(j * (degree_y + 1) + k);
    }
};

struct TrigSamples {
    Grid2 value;
    Grid2 mixed_derivative;  // D1 D2 T
};

inline TrigSamples gen_trigpoly(const TrigCoefficients& coeffs, std::int64_t rows, std::int64_t cols) {
    const int n = coeffs.degree_x;
    const int m = coeffs.degree_y;
    const auto terms = static_cast<std::size_t>((n + 1) * (m + 1));
    if (coeffs.a.size() != terms || coeffs.b.size() != terms || coeffs.c.size() != terms ||
        coeffs.d.size() != terms) {
        throw std::invalid_argument("gen_trigpoly: coefficient matrices must be (n+1) x (m+1)");
    }
    if (rows <= 2 * n || cols <= 2 * m || rows < 2 || cols < 2) {
        throw std::invalid_argument("gen_trigpoly: degree exceeds the Nyquist limit of the grid");
    }
    const auto M = static_cast<std::size_t>(rows);
    const auto N = static_cast<std::size_t>(cols);
    std::vector<double> value(M * N, 0.0);
    std::vector<double> deriv(M * N, 0.0);
    const double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

    for (int j = 0; j <= n; ++j) {
        for (int k = 0; k <= m; ++k) {
            const std::size_t at = coeffs.index(j, k);
            const double a = coeffs.a[at], b = coeffs.b[at], c = coeffs.c[at], d = coeffs.d[at];
            if (a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0) continue;
            const double jk = four_pi_sq * static_cast<double>(j) * static_cast<double>(k);
            for (std::size_t x = 0; x < M; ++x) {
                const double cx = cos_2pi_frac(j * static_cast<std::int64_t>(x), rows);
                const double sx = sin_2pi_frac(j * static_cast<std::int64_t>(x), rows);
                for (std::size_t y = 0; y < N; ++y) {
                    const double cy = cos_2pi_frac(k * static_cast<std::int64_t>(y), cols);
                    const double sy = sin_2pi_frac(k * static_cast<std::int64_t>(y), cols);
                    value[x * N + y] += a * cx * cy + b * cx * sy + c * sx * cy + d * sx * sy;
                    deriv[x * N + y] += jk * (a * sx * sy - b * sx * cy - c * cx * sy + d * cx * cy);
                }
            }
        }
    }
    return {Grid2(M, N, std::move(value)), Grid2(M, N, std::move(deriv))};
}

/// Discrete double antiderivative F(i,j) = (1/(MN)) sum_{s<i, t<j} f(s,t).
/// Requires every row mean and column mean of f to vanish so that F is
/// doubly periodic.
inline Grid2 gen_cumulative(const Grid2& f, double tolerance = 1e-9) {
    const std::size_t M = f.rows(), N = f.cols();
    for (std::size_t i = 0; i < M; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += f(i, j);
        if (std::abs(s / static_cast<double>(N)) > tolerance) {
            throw std::invalid_argument("gen_cumulative: row means must vanish");
        }
    }
    for (std::size_t j = 0; j < N; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < M; ++i) s += f(i, j);
        if (std::abs(s / static_cast<double>(M)) > tolerance) {
            throw std::invalid_argument("gen_cumulative: column means must vanish");
        }
    }
    const double scale = 1.0 / static_cast<double>(M * N);
    std::vector<double> F(M * N, 0.0);
    // Prefix sums of f over [0, i) x [0, j).
    std::vector<double> prev(N + 1, 0.0), cur(N + 1, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = 0; j < N; ++j) F[i * N + j] = prev[j] * scale;
        cur[0] = 0.0;
        for (std::size_t j = 0; j < N; ++j) cur[j + 1] = cur[j] + prev[j + 1] - prev[j] + f(i, j);
        std::swap(prev, cur);
    }
    return Grid2(M, N, std::move(F));
}

}  // namespace pvarlab
