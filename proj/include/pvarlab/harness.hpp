#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pvarlab/check.hpp"
#include "pvarlab/grid.hpp"
#include "pvarlab/io.hpp"
#include "pvarlab/mixednorm.hpp"
#include "pvarlab/modulus.hpp"
#include "pvarlab/pvar1d.hpp"
#include "pvarlab/smoothness.hpp"
#include "pvarlab/vitali2d.hpp"

namespace pvarlab {

inline constexpr const char* kVersion = "0.3.1";

/// Ceiling for the Oskolkov ratio. Products t_n x t_m at p = 1 reach
/// 4 pi^2 in the continuum; the grid L^1 norm of a sine sits slightly below
/// the true norm, so a quarter is added for discretisation.
inline constexpr double kOskolkovCeiling = 1.25 * 4.0 * std::numbers::pi * std::numbers::pi;

using ojson = nlohmann::ordered_json;

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Random corpus

/// Seeded source. The double mapping is written out because the standard
/// distributions are not reproducible across library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::size_t below(std::size_t n) {
        return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
    }

    /// Uniform on [-1, 1) rounded to a multiple of 2^-20.
    double value() { return quantize(2.0 * uniform() - 1.0); }

    static double quantize(double x) { return std::round(x * 0x1.0p20) * 0x1.0p-20; }

private:
    std::mt19937_64 eng_;
};

/// Distinct sorted cut positions in [0, n), between `min_cuts` and `max_cuts`.
inline std::vector<std::size_t> random_cuts(Rng& rng, std::size_t n, std::size_t max_cuts, std::size_t min_cuts = 1) {
    std::set<std::size_t> cuts{0};
    max_cuts = std::max(max_cuts, min_cuts);
    const std::size_t want = min_cuts + rng.below(max_cuts - min_cuts + 1);
    while (cuts.size() < std::min(want, n)) cuts.insert(rng.below(n));
    return {cuts.begin(), cuts.end()};
}

inline Grid1 random_grid1(Rng& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.value();
    return Grid1(std::move(v));
}

inline Grid2 random_grid2(Rng& rng, std::size_t rows, std::size_t cols) {
    std::vector<double> v(rows * cols);
    for (auto& x : v) x = rng.value();
    return Grid2(rows, cols, std::move(v));
}

/// Piecewise constant with at most `max_jumps` cyclic jumps.
inline Grid1 random_piecewise_constant(Rng& rng, std::size_t n, std::size_t max_jumps) {
    const auto cuts = random_cuts(rng, n, max_jumps, 2);
    std::vector<double> v(n);
    std::size_t c = 0;
    double level = rng.value();
    for (std::size_t k = 0; k < n; ++k) {
        if (c < cuts.size() && cuts[c] == k) {
            level = rng.value();
            ++c;
        }
        v[k] = level;
    }
    return Grid1(std::move(v));
}

/// Periodic linear interpolation between random knot values.
inline Grid1 random_piecewise_linear(Rng& rng, std::size_t n, std::size_t max_knots) {
    const auto knots = random_cuts(rng, n, max_knots, 2);
    std::vector<double> level(knots.size());
    for (auto& x : level) x = rng.value();
    std::vector<double> v(n);
    for (std::size_t a = 0; a < knots.size(); ++a) {
        const std::size_t b = (a + 1) % knots.size();
        const std::size_t start = knots[a];
        const std::size_t len = (b == 0 ? n + knots[0] : knots[b]) - start;
        for (std::size_t s = 0; s < len; ++s) {
            const double t = static_cast<double>(s) / static_cast<double>(len);
            v[(start + s) % n] = Rng::quantize(level[a] + t * (level[b] - level[a]));
        }
    }
    return Grid1(std::move(v));
}

inline Grid2 random_block_field(Rng& rng, std::size_t rows, std::size_t cols, std::size_t max_jumps) {
    const auto rc = random_cuts(rng, rows, max_jumps, 2);
    const auto cc = random_cuts(rng, cols, max_jumps, 2);
    std::vector<double> block(rc.size() * cc.size());
    for (auto& x : block) x = rng.value();
    auto which = [](const std::vector<std::size_t>& cuts, std::size_t k) {
        return static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), k) - cuts.begin()) - 1;
    };
    std::vector<double> v(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) v[i * cols + j] = block[which(rc, i) * cc.size() + which(cc, j)];
    return Grid2(rows, cols, std::move(v));
}

/// Sum of two tensor products of random piecewise linear profiles.
inline Grid2 random_bilinear_field(Rng& rng, std::size_t rows, std::size_t cols, std::size_t max_knots) {
    std::vector<double> v(rows * cols, 0.0);
    for (int r = 0; r < 2; ++r) {
        const Grid1 g = random_piecewise_linear(rng, rows, max_knots);
        const Grid1 h = random_piecewise_linear(rng, cols, max_knots);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) v[i * cols + j] += g[i] * h[j];
    }
    return Grid2(rows, cols, std::move(v));
}

/// Double centring of a random grid. With power-of-two sizes every mean is
/// computed exactly, so rows and columns sum to zero exactly.
inline Grid2 random_mean_zero(Rng& rng, std::size_t rows, std::size_t cols) {
    return decompose_lp0(random_grid2(rng, rows, cols)).core;
}

inline TrigCoefficients random_trig_coefficients(Rng& rng, int n, int m) {
    TrigCoefficients c(n, m);
    for (int j = 0; j <= n; ++j) {
        for (int k = 0; k <= m; ++k) {
            const auto at = c.index(j, k);
            c.a[at] = rng.value();
            c.b[at] = (k == 0) ? 0.0 : rng.value();
            c.c[at] = (j == 0) ? 0.0 : rng.value();
            c.d[at] = (j == 0 || k == 0) ? 0.0 : rng.value();
        }
    }
    return c;
}

/// Smallest multiple of `align` that is >= at_least.
inline std::size_t aligned_size(std::size_t align, std::size_t at_least) {
    return align * ((at_least + align - 1) / align);
}

inline Grid2 sine_product(std::size_t n, std::size_t m, std::size_t size) {
    const auto a = static_cast<std::int64_t>(n), b = static_cast<std::int64_t>(m);
    const auto s = static_cast<std::int64_t>(size);
    return gen_product(gen_sine(a, s), gen_sine(b, s));
}

struct Sample1 {
    std::string family;
    std::string label;
    Grid1 g;
};

struct Sample2 {
    std::string family;
    std::string label;
    Grid2 f;
    bool smooth = false;
};

inline const std::vector<std::string>& all_families() {
    static const std::vector<std::string> f{"random-pc", "random-pl", "product", "sine",   "staircase",
                                            "series",    "cumulative", "trigpoly", "tent", "gn"};
    return f;
}

inline const std::vector<std::string>& all_suites() {
    static const std::vector<std::string> s{"sanity", "pvar-oracle", "vitali-oracle", "golubov",
                                            "modulus", "lemmas",    "chain",         "hardy-littlewood",
                                            "main-estimate", "wp",  "sharpness"};
    return s;
}

struct SuiteConfig {
    std::uint64_t seed = 7;
    std::vector<std::string> families = all_families();
    std::vector<std::string> suites = all_suites();
    std::vector<double> p_grid{1.1, 1.5, 2.0, 3.0, 8.0};
    std::size_t size_1d = 64;
    std::size_t size_2d = 16;
    std::size_t samples_per_family = 2;
    std::size_t pvar_oracle_size = 12;
    std::size_t pvar_oracle_count = 200;
    std::size_t vitali_oracle_size = 6;
    std::size_t vitali_oracle_count = 60;
    std::size_t oracle_limit_1d = kPVarOracleLimit;
    std::size_t oracle_limit_2d = kVitaliOracleLimit;
    std::size_t hardy_littlewood_size = 64;
    bool cap_override = false;
    bool inject_failure = false;
    std::string timestamp = "1970-01-01T00:00:00Z";

    void validate() const {
        for (const auto& f : families)
            if (std::find(all_families().begin(), all_families().end(), f) == all_families().end())
                throw ConfigError("unknown family '" + f + "'");
        for (const auto& s : suites)
            if (std::find(all_suites().begin(), all_suites().end(), s) == all_suites().end())
                throw ConfigError("unknown suite '" + s + "'");
        for (double p : p_grid)
            if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p grid entries must exceed 1");
        if (oracle_limit_1d > kPVarOracleLimit || oracle_limit_2d > kVitaliOracleLimit)
            throw ConfigError("oracle limit above the hard maximum");
        if (pvar_oracle_size > oracle_limit_1d || pvar_oracle_size < 2)
            throw ConfigError("1D oracle size exceeds the oracle limit");
        if (vitali_oracle_size > oracle_limit_2d || vitali_oracle_size < 2)
            throw ConfigError("2D oracle size exceeds the oracle limit");
        if (size_2d < 8 || (size_2d & (size_2d - 1)) != 0) throw ConfigError("2D size must be a power of two >= 8");
        if (size_1d < 16 || (size_1d & (size_1d - 1)) != 0) throw ConfigError("1D size must be a power of two >= 16");
        if (!cap_override && (size_2d > kMixedTableCap || hardy_littlewood_size > kMixedTableCap))
            throw ConfigError("2D size above the mixed-table cap");
    }

    [[nodiscard]] bool has_family(const std::string& f) const {
        return std::find(families.begin(), families.end(), f) != families.end();
    }
};

inline std::vector<Sample1> corpus_1d(const SuiteConfig& cfg, Rng& rng) {
    std::vector<Sample1> out;
    const std::size_t N = cfg.size_1d;
    const auto sN = static_cast<std::int64_t>(N);
    for (std::size_t s = 0; s < cfg.samples_per_family; ++s) {
        const std::string tag = "#" + std::to_string(s);
        if (cfg.has_family("random-pc")) out.push_back({"random-pc", tag, random_piecewise_constant(rng, N, 6)});
        if (cfg.has_family("random-pl")) out.push_back({"random-pl", tag, random_piecewise_linear(rng, N, 6)});
    }
    if (cfg.has_family("tent"))
        for (std::int64_t n : {1, 4, 8}) out.push_back({"tent", "n=" + std::to_string(n), gen_tent_scaled(n, sN)});
    if (cfg.has_family("sine"))
        for (std::int64_t n : {1, 4}) out.push_back({"sine", "n=" + std::to_string(n), gen_sine(n, sN)});
    if (cfg.has_family("gn"))
        for (int n : {1, 3}) out.push_back({"gn", "n=" + std::to_string(n), gen_gn(n, sN)});
    return out;
}

inline std::vector<Sample2> corpus_2d(const SuiteConfig& cfg, Rng& rng) {
    std::vector<Sample2> out;
    const std::size_t N = cfg.size_2d;
    const auto sN = static_cast<std::int64_t>(N);
    for (std::size_t s = 0; s < cfg.samples_per_family; ++s) {
        const std::string tag = "#" + std::to_string(s);
        if (cfg.has_family("random-pc")) out.push_back({"random-pc", tag, random_block_field(rng, N, N, 5)});
        if (cfg.has_family("random-pl")) out.push_back({"random-pl", tag, random_bilinear_field(rng, N, N, 5)});
    }
    if (cfg.has_family("product")) {
        out.push_back({"product", "tent2xrandom-pl",
                       gen_product(gen_tent_scaled(2, sN), random_piecewise_linear(rng, N, 4))});
    }
    if (cfg.has_family("sine")) {
        out.push_back({"sine", "t1xt1", sine_product(1, 1, N), true});
        out.push_back({"sine", "t2xt1", sine_product(2, 1, N), true});
    }
    if (cfg.has_family("staircase")) out.push_back({"staircase", "N=" + std::to_string(N), gen_staircase(sN)});
    if (cfg.has_family("series")) {
        int M = 1;
        while ((std::int64_t{1} << (M + 2)) <= sN && M < 4) ++M;
        out.push_back({"series", "M=" + std::to_string(M), gen_series_f(M, Exponent(2.0), sN).grid});
    }
    if (cfg.has_family("cumulative"))
        out.push_back({"cumulative", "mean-zero", gen_cumulative(random_mean_zero(rng, N, N))});
    if (cfg.has_family("trigpoly")) {
        const auto c = random_trig_coefficients(rng, 2, 3);
        out.push_back({"trigpoly", "(2,3)", gen_trigpoly(c, sN, sN).value});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report

struct Check {
    std::string id;
    std::string anchor;
    ojson inputs = ojson::object();
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool pass = true;

    [[nodiscard]] double margin() const noexcept { return rhs - lhs; }
};

struct SweepRow {
    std::string family;
    double p = 1.0;
    int n = 0;
    std::vector<std::pair<std::string, double>> values;

    void set(const std::string& key, double v) { values.emplace_back(key, v); }
    [[nodiscard]] double get(const std::string& key) const {
        for (const auto& [k, v] : values)
            if (k == key) return v;
        return std::numeric_limits<double>::quiet_NaN();
    }
};

struct CheckReport {
    std::uint64_t seed = 0;
    std::string timestamp;
    std::vector<Check> checks;
    std::vector<SweepRow> sweeps;

    [[nodiscard]] bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    [[nodiscard]] std::size_t failures() const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
    }
    [[nodiscard]] int exit_code() const { return all_pass() ? 0 : 1; }

    void add(Check c) { checks.push_back(std::move(c)); }

    /// Record a margin report as one check through its binding entry.
    void add(const MarginReport& r, std::string anchor, ojson inputs) {
        Check c;
        c.id = r.id;
        c.anchor = std::move(anchor);
        c.inputs = std::move(inputs);
        c.inputs["entries"] = r.entries.size();
        c.inputs["violations"] = r.violations();
        c.tolerance = r.tolerance;
        if (!r.entries.empty()) {
            const Margin w = r.worst();
            c.inputs["binding"] = w.where;
            c.lhs = w.lhs;
            c.rhs = w.rhs;
        }
        c.pass = r.pass();
        checks.push_back(std::move(c));
    }

    /// lhs <= rhs with relative slack `tol`.
    void add(std::string id, std::string anchor, ojson inputs, double lhs, double rhs, double tol = 1e-12) {
        MarginReport r;
        r.id = std::move(id);
        r.tolerance = tol;
        r.add("value", lhs, rhs);
        add(r, std::move(anchor), std::move(inputs));
    }

    [[nodiscard]] ojson to_json() const {
        ojson j;
        j["meta"] = {{"version", kVersion}, {"seed", seed}, {"timestamp", timestamp}};
        j["checks"] = ojson::array();
        for (const auto& c : checks) {
            ojson o;
            o["id"] = c.id;
            o["paper_anchor"] = c.anchor;
            o["inputs"] = c.inputs;
            o["lhs"] = c.lhs;
            o["rhs"] = c.rhs;
            o["margin"] = c.margin();
            o["tolerance"] = c.tolerance;
            o["pass"] = c.pass;
            j["checks"].push_back(std::move(o));
        }
        j["sweeps"] = ojson::array();
        for (const auto& s : sweeps) {
            ojson o;
            o["family"] = s.family;
            o["p"] = s.p;
            o["n"] = s.n;
            ojson values = ojson::object();
            for (const auto& [k, v] : s.values) values[k] = v;
            o["values"] = std::move(values);
            j["sweeps"].push_back(std::move(o));
        }
        return j;
    }
};

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "family,p,n,key,value\n";
    for (const auto& r : rows)
        for (const auto& [k, v] : r.values)
            out << r.family << ',' << format_double(r.p) << ',' << r.n << ',' << k << ',' << format_double(v) << '\n';
}

inline void save_report_json(const CheckReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << report.to_json().dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Composite checks

struct HardyLittlewoodResult {
    double sup_ratio = 0.0;  // S = max omega(u,v)_1 / (uv)
    double variation = 0.0;  // V = v_1^(2), exact
    MarginReport below;      // S(u,v) <= V at every grid point

    [[nodiscard]] double relative_gap() const {
        if (variation == 0.0) return sup_ratio == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return std::abs(sup_ratio - variation) / variation;
    }
};

inline HardyLittlewoodResult hardy_littlewood_check(const Grid2& f, bool cap_override = false) {
    const Exponent one(1.0);
    const auto table = modulus_mixed(f, one, cap_override);
    HardyLittlewoodResult r;
    r.variation = vitali_finest(f, one);
    r.below.id = "hardy_littlewood_below";
    const double dm = static_cast<double>(table.rows), dn = static_cast<double>(table.cols);
    for (std::size_t k = 1; k <= table.rows; ++k) {
        for (std::size_t l = 1; l <= table.cols; ++l) {
            const double ratio = table(k, l) * dm * dn / (static_cast<double>(k) * static_cast<double>(l));
            r.sup_ratio = std::max(r.sup_ratio, ratio);
            r.below.add(std::to_string(k) + "," + std::to_string(l), ratio, r.variation);
        }
    }
    return r;
}

struct EmbeddingResult {
    MeasuredConstant sup_form;
    MeasuredConstant variation_form;
};

inline EmbeddingResult embedding_1d_check(const Grid1& g, const Exponent& p) {
    detail::require_singular_exponent(p);
    const auto table = modulus_1d(g, p);
    const double j = p.inv_p_pconj() * integral_J(table).hi;
    EmbeddingResult r;
    r.sup_form = MeasuredConstant::of(sup_norm(g), lp_norm(g, p) + j);
    r.variation_form = MeasuredConstant::of(pvar(g, p), table.values.back() + j);
    return r;
}

struct MainEstimateResult {
    double vitali_lower = 0.0;
    Bracket bracket;
    MeasuredConstant variation_form;
    MeasuredConstant sup_form;
};

inline MainEstimateResult main_estimate_check(const Grid2& f, const Exponent& p, bool cap_override = false) {
    detail::require_singular_exponent(p);
    const Grid2 core = decompose_lp0(f).core;
    const auto table = modulus_mixed(core, p, cap_override);
    MainEstimateResult r;
    r.vitali_lower = vitali_certified(core, p).lower;
    r.bracket = smoothness_bracket(table);
    r.variation_form = MeasuredConstant::of(r.vitali_lower, r.bracket.total());
    const double c = p.inv_p_pconj();
    const double sup_bracket =
        lp_norm(core, p) + c * integral_J(modulus_iso_2d(core, p)).hi + r.bracket.i_term;
    r.sup_form = MeasuredConstant::of(sup_norm(core), sup_bracket);
    return r;
}

/// Constant of the series construction: with c_p = 1 + 2^(p-1)/(2^(p-1)-1)
/// every net value is at most (2 c_p)^(1/p).
inline double series_vitali_bound(const Exponent& p) {
    detail::require_singular_exponent(p);
    const double q = std::pow(2.0, p.value() - 1.0);
    return std::pow(2.0 * (1.0 + q / (q - 1.0)), 1.0 / p.value());
}

enum class SweepFamily { t1xt1, tnxt1, tnxtn, trigpoly };

inline SweepFamily parse_sweep_family(const std::string& s) {
    if (s == "t1xt1") return SweepFamily::t1xt1;
    if (s == "tnxt1") return SweepFamily::tnxt1;
    if (s == "tnxtn") return SweepFamily::tnxtn;
    if (s == "trigpoly") return SweepFamily::trigpoly;
    throw ConfigError("unknown sweep family '" + s + "'");
}

inline const char* to_string(SweepFamily f) {
    switch (f) {
        case SweepFamily::t1xt1: return "t1xt1";
        case SweepFamily::tnxt1: return "tnxt1";
        case SweepFamily::tnxtn: return "tnxtn";
        case SweepFamily::trigpoly: return "trigpoly";
    }
    return "?";
}

/// Diagnostic rows for the sharpness discussion. For trigpoly, each n is
/// paired with every m in `n_grid` (random coefficients from `seed`).
inline std::vector<SweepRow> sharpness_sweep(SweepFamily family, const std::vector<double>& p_grid,
                                             const std::vector<int>& n_grid, std::size_t min_size = 32,
                                             std::uint64_t seed = 7, bool with_integrals = true) {
    struct Item {
        int n, m;
        Grid2 f;
    };
    std::vector<Item> items;
    Rng rng(seed);
    for (int n : n_grid) {
        if (n < 1) throw ConfigError("sweep degrees must be positive");
        switch (family) {
            case SweepFamily::t1xt1:
                items.push_back({1, 1, sine_product(1, 1, aligned_size(4, min_size))});
                break;
            case SweepFamily::tnxt1:
                items.push_back({n, 1, sine_product(n, 1, aligned_size(4 * n, min_size))});
                break;
            case SweepFamily::tnxtn:
                items.push_back({n, n, sine_product(n, n, aligned_size(4 * n, min_size))});
                break;
            case SweepFamily::trigpoly:
                for (int m : n_grid) {
                    const auto size = static_cast<std::int64_t>(std::max<std::size_t>(min_size, 8 * std::max(n, m)));
                    items.push_back({n, m, gen_trigpoly(random_trig_coefficients(rng, n, m), size, size).value});
                }
                break;
        }
        if (family == SweepFamily::t1xt1) break;
    }

    std::vector<SweepRow> rows;
    for (double pv : p_grid) {
        const Exponent p(pv);
        for (const auto& it : items) {
            SweepRow row;
            row.family = to_string(family);
            row.p = pv;
            row.n = it.n;
            row.set("m", it.m);
            row.set("size", static_cast<double>(it.f.rows()));
            const double v = vitali_certified(it.f, p).lower;
            const double norm = lp_norm(it.f, p);
            row.set("vitali_lower", v);
            row.set("norm_p", norm);
            row.set("oskolkov_ratio",
                    v / (std::pow(static_cast<double>(it.n) * static_cast<double>(it.m), 1.0 / pv) * norm));
            if (with_integrals && !p.is_one()) {
                const auto table = modulus_mixed(it.f, p);
                const Enclosure K = integral_K(table);
                const Enclosure I = integral_I(table);
                const double pc = p.conj();
                row.set("omega11", table(table.rows, table.cols));
                row.set("K_lo", K.lo);
                row.set("K_hi", K.hi);
                row.set("I_lo", I.lo);
                row.set("I_hi", I.hi);
                row.set("p1_sharpness", v * pc * pc / I.hi);
                row.set("term_necessity", v / (1.0 + K.hi / pv + I.hi / (pv * pv)));
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// Suites

namespace detail {

inline ojson describe(const Sample2& s, double p) {
    return {{"family", s.family}, {"label", s.label}, {"M", s.f.rows()}, {"N", s.f.cols()}, {"p", p}};
}

inline ojson describe(const Sample1& s, double p) {
    return {{"family", s.family}, {"label", s.label}, {"N", s.g.size()}, {"p", p}};
}

/// Runs one sub-check; an exception becomes a failed check.
inline void guarded(CheckReport& report, const std::string& id, const std::string& anchor, const ojson& inputs,
                    const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        Check c;
        c.id = id;
        c.anchor = anchor;
        c.inputs = inputs;
        c.inputs["error"] = e.what();
        c.lhs = std::numeric_limits<double>::quiet_NaN();
        c.rhs = std::numeric_limits<double>::quiet_NaN();
        c.pass = false;
        report.add(std::move(c));
    }
}

inline double max_abs_diff(std::span<const double> a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

inline std::vector<double> modulus_p_grid(const SuiteConfig& cfg) {
    std::vector<double> ps{1.0};
    ps.insert(ps.end(), cfg.p_grid.begin(), cfg.p_grid.end());
    return ps;
}

inline void suite_sanity(const SuiteConfig& cfg, CheckReport& rep) {
    const auto N = static_cast<std::int64_t>(cfg.size_1d);
    guarded(rep, "tent_closed_form", "phi_n(x) = phi(n x)", {{"N", N}}, [&] {
        double err = 0.0;
        for (std::int64_t n : {1, 2, 4, 8}) {
            const Grid1 g = gen_tent_scaled(n, N);
            for (std::int64_t k = 0; k < N; ++k) {
                const double x = static_cast<double>(n * k) / static_cast<double>(N);
                err = std::max(err, std::abs(g[static_cast<std::size_t>(k)] - std::abs(x - std::round(x))));
            }
        }
        rep.add("tent_closed_form", "phi_n(x) = phi(n x)", {{"N", N}}, err, 1e-12, 0.0);
    });
    guarded(rep, "sine_closed_form", "t_n(x) = sin 2 pi n x", {{"N", N}}, [&] {
        double err = 0.0;
        for (std::int64_t n : {1, 2, 4}) {
            const Grid1 g = gen_sine(n, N);
            for (std::int64_t k = 0; k < N; ++k)
                err = std::max(err, std::abs(g[static_cast<std::size_t>(k)] -
                                             std::sin(2.0 * std::numbers::pi * static_cast<double>(n * k) /
                                                      static_cast<double>(N))));
        }
        rep.add("sine_closed_form", "t_n(x) = sin 2 pi n x", {{"N", N}}, err, 1e-12, 0.0);
    });
    guarded(rep, "gn_support", "g_n(x) = phi(2^n x - 1) chi_[0,1](2^n x - 1)", {{"N", N}}, [&] {
        double outside = 0.0, peak_err = 0.0;
        for (int n : {1, 2, 3}) {
            const Grid1 g = gen_gn(n, N);
            for (std::int64_t k = 0; k < N; ++k) {
                const double x = static_cast<double>(k) / static_cast<double>(N);
                const double lo = std::ldexp(1.0, -n), hi = 2.0 * lo;
                if (x < lo || x > hi) outside = std::max(outside, std::abs(g[static_cast<std::size_t>(k)]));
            }
            peak_err = std::max(peak_err, std::abs(g[static_cast<std::size_t>(3 * N >> (n + 1))] - 0.5));
        }
        rep.add("gn_support", "g_n(x) = phi(2^n x - 1) chi_[0,1](2^n x - 1)", {{"N", N}},
                std::max(outside, peak_err), 0.0, 0.0);
    });
    guarded(rep, "staircase_sections", "v_p(f_x) = v_p(f_y) = 2^(1/p)", {{"N", 16}}, [&] {
        const Grid2 f = gen_staircase(16);
        MarginReport r;
        r.id = "staircase_sections";
        for (double pv : modulus_p_grid(cfg)) {
            const Exponent p(pv);
            const double want = std::pow(2.0, 1.0 / pv);
            // Row x = 1/N and column y = 1 are constant on the grid.
            for (std::size_t i = 0; i < 16; ++i) {
                r.add("row " + std::to_string(i), std::abs(pvar(f.row(i), p) - (i == 1 ? 0.0 : want)), 1e-12);
                r.add("col " + std::to_string(i), std::abs(pvar(f.col(i), p) - (i == 0 ? 0.0 : want)), 1e-12);
            }
        }
        rep.add(r, "v_p(f_x) = v_p(f_y) = 2^(1/p)", {{"N", 16}});
    });
    guarded(rep, "series_zero_lines", "f(1,y) = 0 and f(x,0) = 0", {{"N", 64}}, [&] {
        const Grid2 f = gen_series_f(4, Exponent(2.0), 64).grid;
        double m = 0.0;
        for (std::size_t k = 0; k < 64; ++k) m = std::max({m, std::abs(f(0, k)), std::abs(f(k, 0))});
        rep.add("series_zero_lines", "f(1,y) = 0 and f(x,0) = 0", {{"N", 64}, {"M", 4}}, m, 0.0, 0.0);
    });
    guarded(rep, "series_refinement", "f(x,y) = sum 2^(-n/p) g_n(x) phi(2^n y)", {{"N", 32}}, [&] {
        const Grid2 a = gen_series_f(3, Exponent(1.5), 32).grid;
        const Grid2 b = gen_series_f(3, Exponent(1.5), 64).grid;
        double m = 0.0;
        for (std::size_t i = 0; i < 32; ++i)
            for (std::size_t j = 0; j < 32; ++j) m = std::max(m, std::abs(a(i, j) - b(2 * i, 2 * j)));
        rep.add("series_refinement", "f(x,y) = sum 2^(-n/p) g_n(x) phi(2^n y)", {{"N", 32}, {"M", 3}}, m, 0.0,
                0.0);
    });
    guarded(rep, "csv_round_trip", "grid file format", {}, [&] {
        Rng rng(cfg.seed ^ 0x5eedULL);
        const Grid2 f = random_grid2(rng, 5, 7);
        std::stringstream ss;
        write_csv(ss, f);
        const auto back = std::get<Grid2>(read_csv(ss));
        rep.add("csv_round_trip", "grid file format", {{"M", 5}, {"N", 7}}, back == f ? 0.0 : 1.0, 0.0, 0.0);
    });
}

inline void suite_pvar_oracle(const SuiteConfig& cfg, CheckReport& rep) {
    Rng rng(cfg.seed * 1000003ULL + 1);
    for (double pv : {1.0, 1.5, 2.0, 3.0}) {
        const Exponent p(pv);
        const ojson in{{"count", cfg.pvar_oracle_count}, {"max_N", cfg.pvar_oracle_size}, {"p", pv}};
        guarded(rep, "pvar_oracle", "v_p(f) = sup over partitions", in, [&] {
            std::size_t mismatches = 0;
            for (std::size_t t = 0; t < cfg.pvar_oracle_count; ++t) {
                const std::size_t n = 2 + rng.below(cfg.pvar_oracle_size - 1);
                const Grid1 g = random_grid1(rng, n);
                if (pvar(g, p) != pvar_oracle(g, p, cfg.oracle_limit_1d)) ++mismatches;
            }
            rep.add("pvar_oracle", "v_p(f) = sup over partitions", in, static_cast<double>(mismatches), 0.0, 0.0);
        });
    }
    for (double pv : {1.0, 1.5, 2.0, 3.0}) {
        const Exponent p(pv);
        MarginReport r;
        r.id = "tent_variation";
        for (std::int64_t n : {1, 2, 4, 8}) {
            const double got = pvar(gen_tent_scaled(n, 16 * n), p);
            const double want = std::pow(2.0, 1.0 / pv - 1.0) * std::pow(static_cast<double>(n), 1.0 / pv);
            r.add("n=" + std::to_string(n), std::abs(got - want), 1e-12);
        }
        rep.add(r, "v_p(phi_n) = 2^(1/p-1) n^(1/p)", {{"p", pv}});
    }
    for (double pv : {1.0, 2.0, 3.0}) {
        MarginReport r;
        r.id = "sine_variation";
        for (std::int64_t n : {1, 2, 3}) {
            const double got = pvar(gen_sine(n, 4 * n), Exponent(pv));
            const double want = 2.0 * std::pow(2.0 * static_cast<double>(n), 1.0 / pv);
            r.add("n=" + std::to_string(n), std::abs(got - want), 1e-12);
        }
        rep.add(r, "v_p(t_n) = 2 (2n)^(1/p)", {{"p", pv}});
    }
}

inline void suite_vitali_oracle(const SuiteConfig& cfg, CheckReport& rep) {
    Rng rng(cfg.seed * 1000003ULL + 2);
    const std::size_t n = cfg.vitali_oracle_size;
    for (double pv : {1.5, 2.0, 3.0}) {
        const Exponent p(pv);
        const ojson in{{"count", cfg.vitali_oracle_count}, {"M", n}, {"N", n}, {"p", pv}};
        guarded(rep, "vitali_ascent_dominated", "v_p^(2)(f) = sup over nets", in, [&] {
            MarginReport below;
            below.id = "vitali_ascent_dominated";
            std::size_t equal = 0;
            for (std::size_t t = 0; t < cfg.vitali_oracle_count; ++t) {
                const Grid2 f = random_grid2(rng, n, n);
                const double a = vitali_ascent(f, p).value;
                const double o = vitali_oracle(f, p, cfg.oracle_limit_2d);
                below.add("#" + std::to_string(t), a, o);
                if (a == o) ++equal;
            }
            below.tolerance = 0.0;
            rep.add(below, "v_p^(2)(f) = sup over nets", in);
            const double frac = static_cast<double>(equal) / static_cast<double>(cfg.vitali_oracle_count);
            rep.add("vitali_ascent_agreement", "v_p^(2)(f) = sup over nets", in, 0.99, frac, 0.0);
        });
    }
    {
        const ojson in{{"count", cfg.vitali_oracle_count}, {"M", 5}, {"N", 5}, {"p", 1}};
        guarded(rep, "vitali_finest_p1", "v_1^(2) attained on the finest net", in, [&] {
            std::size_t mismatches = 0;
            for (std::size_t t = 0; t < cfg.vitali_oracle_count; ++t) {
                const Grid2 f = random_grid2(rng, 5, 5);
                if (vitali_finest(f, Exponent(1.0)) != vitali_oracle(f, Exponent(1.0), cfg.oracle_limit_2d))
                    ++mismatches;
            }
            rep.add("vitali_finest_p1", "v_1^(2) attained on the finest net", in, static_cast<double>(mismatches),
                    0.0, 0.0);
        });
    }
    const std::vector<std::pair<std::string, Grid1>> factors{{"tent1", gen_tent_scaled(1, 4)},
                                                             {"tent2", gen_tent_scaled(2, 4)},
                                                             {"sine1", gen_sine(1, 4)},
                                                             {"tent3/6", gen_tent_scaled(3, 6)}};
    for (double pv : {1.0, 1.5, 2.0, 3.0}) {
        const Exponent p(pv);
        MarginReport ident, asc;
        ident.id = "product_identity";
        ident.tolerance = 1e-9;
        asc.id = "product_ascent_exact";
        asc.tolerance = 0.0;
        for (const auto& [gn, g] : factors) {
            for (const auto& [hn, h] : factors) {
                const Grid2 f = gen_product(g, h);
                const double o = vitali_oracle(f, p, cfg.oracle_limit_2d);
                const double want = pvar(g, p) * pvar(h, p);
                ident.add(gn + "x" + hn, std::abs(o - want), 1e-9 * std::max(1.0, want));
                const double a = vitali_ascent(f, p).value;
                asc.add(gn + "x" + hn, std::abs(a - o), 0.0);
            }
        }
        rep.add(ident, "v_p^(2)(f) = v_p(g) v_p(h)", {{"p", pv}});
        rep.add(asc, "v_p^(2)(f) = v_p(g) v_p(h)", {{"p", pv}});
    }
}

inline void suite_golubov(const SuiteConfig& cfg, CheckReport& rep) {
    Rng rng(cfg.seed * 1000003ULL + 3);
    for (std::size_t n : {4, 8, 16, 32}) {
        const ojson in{{"M", n}, {"N", n}};
        guarded(rep, "golubov_identity", "v_1^(2)(F) = int int |f(x,y)| dx dy", in, [&] {
            const Grid2 f = random_mean_zero(rng, n, n);
            const double lhs = vitali_finest(gen_cumulative(f), Exponent(1.0));
            const double rhs = lp_norm(f, Exponent(1.0));
            rep.add("golubov_identity", "v_1^(2)(F) = int int |f(x,y)| dx dy", in, std::abs(lhs - rhs),
                    1e-12 * std::max(1.0, rhs), 0.0);
        });
    }
}

inline void suite_modulus(const SuiteConfig& cfg, CheckReport& rep, const std::vector<Sample1>& c1,
                          const std::vector<Sample2>& c2) {
    for (const auto& s : c1) {
        for (double pv : modulus_p_grid(cfg)) {
            const Exponent p(pv);
            const auto in = describe(s, pv);
            guarded(rep, "modulus_1d", "omega(f;2d)_p <= 2 omega(f;d)_p", in, [&] {
                rep.add(table_invariants_check(modulus_1d(s.g, p)), "omega(f;2d)_p <= 2 omega(f;d)_p", in);
                rep.add(averaged_modulus_check(s.g, p), "omega(f;d)_p <= (3/d) int_0^d ||Delta(t)f||_p dt", in);
                rep.add(omega_sandwich_check(s.g, p), "omega(f;1)_p <= 2 Omega_p(f)", in);
                MarginReport diff;
                diff.id = "diff_modulus_bound_1d";
                for (std::size_t h : {std::size_t{1}, s.g.size() / 4, s.g.size() / 2})
                    diff.merge(diff_modulus_bound_check(s.g, h, p));
                rep.add(diff, "omega(Delta(h)f;d)_p <= 2 min{omega(f;d)_p, omega(f;h)_p}", in);
            });
        }
    }
    for (const auto& s : c2) {
        for (double pv : modulus_p_grid(cfg)) {
            const Exponent p(pv);
            const auto in = describe(s, pv);
            guarded(rep, "modulus_2d", "omega(f;2u,v)_p <= 2 omega(f;u,v)_p", in, [&] {
                rep.add(table_invariants_check(modulus_mixed(s.f, p, cfg.cap_override)),
                        "omega(f;2u,v)_p <= 2 omega(f;u,v)_p", in);
                auto iso = table_invariants_check(modulus_iso_2d(s.f, p), s.f.rows() == s.f.cols());
                iso.id = "modulus_iso_invariants";
                rep.add(iso, "omega(f;2d)_p <= 2 omega(f;d)_p", in);
                MarginReport diff;
                diff.id = "diff_modulus_bound";
                for (std::size_t h : {std::size_t{1}, s.f.rows() / 4})
                    diff.merge(diff_modulus_bound_check(s.f, h, p, cfg.cap_override));
                rep.add(diff, "omega(Delta_1(h)f;u,v)_p <= 2 min{omega(f;u,v)_p, omega(f;h,v)_p}", in);
            });
        }
    }
    // Modulus against the exact variation on oracle-sized grids.
    Rng rng(cfg.seed * 1000003ULL + 5);
    for (double pv : modulus_p_grid(cfg)) {
        const Exponent p(pv);
        const ojson in{{"M", cfg.vitali_oracle_size}, {"N", cfg.vitali_oracle_size}, {"p", pv}, {"count", 4}};
        guarded(rep, "modulus_vs_variation", "omega(f;u,v)_p <= v_p^(2)(f) u^(1/p) v^(1/p)", in, [&] {
            MarginReport r;
            r.id = "modulus_vs_variation";
            for (int t = 0; t < 4; ++t) {
                const Grid2 f = random_grid2(rng, cfg.vitali_oracle_size, cfg.vitali_oracle_size);
                const auto v = vitali_certified(f, p, cfg.oracle_limit_2d);
                r.merge(golubov_modulus_check(modulus_mixed(f, p), *v.upper));
            }
            rep.add(r, "omega(f;u,v)_p <= v_p^(2)(f) u^(1/p) v^(1/p)", in);
        });
    }
}

inline void suite_lemmas(const SuiteConfig& cfg, CheckReport& rep, const std::vector<Sample2>& c2) {
    for (const auto& s : c2) {
        for (double pv : {1.0, 1.5, 2.0, 3.0}) {
            const Exponent p(pv);
            const auto in = describe(s, pv);
            guarded(rep, "section_lipschitz", "|v_p(f_x'') - v_p(f_x')| <= 2 v_p(g)", in, [&] {
                rep.add(section_lipschitz_check(s.f, p), "|v_p(f_x'') - v_p(f_x')| <= 2 v_p(g)", in);
                std::optional<std::size_t> x0;
                if (s.family == "series") x0 = 0;
                rep.add(hardy_section_check(s.f, p, x0, cfg.oracle_limit_2d),
                        "v_p(f_x) <= v_p^(2)(f) + v_p(f_x0)", in);
            });
        }
        const auto in = describe(s, 0.0);
        guarded(rep, "decomposition", "f = fbar + phi_1(x) + phi_2(y)", in, [&] {
            const auto d = decompose_lp0(s.f);
            const double scale = std::max(1.0, sup_norm(s.f));
            double recon = 0.0, means = 0.0;
            for (std::size_t i = 0; i < s.f.rows(); ++i)
                for (std::size_t j = 0; j < s.f.cols(); ++j)
                    recon = std::max(recon, std::abs(d.core(i, j) + d.marginal_x[i] + d.marginal_y[j] - s.f(i, j)));
            const auto again = decompose_lp0(d.core);
            means = std::max(sup_norm(again.marginal_x), sup_norm(again.marginal_y));
            rep.add("decomposition_reconstructs", "f = fbar + phi_1(x) + phi_2(y)", in, recon, 1e-12 * scale, 0.0);
            rep.add("decomposition_mean_zero", "fbar in L^p_0", in, means, 1e-9 * scale, 0.0);
        });
        for (double pv : {1.5, 3.0}) {
            const Exponent p(pv);
            const auto inp = describe(s, pv);
            guarded(rep, "integral_marginal_invariance", "I_p(f) = I_p(g) for additive perturbations", inp, [&] {
                const Enclosure a = integral_I(modulus_mixed(s.f, p, cfg.cap_override));
                const Enclosure b = integral_I(modulus_mixed(decompose_lp0(s.f).core, p, cfg.cap_override));
                // enclosures must overlap
                rep.add("integral_marginal_invariance", "I_p(f) = I_p(g) for additive perturbations", inp,
                        std::max(a.lo, b.lo), std::min(a.hi, b.hi), 1e-12);
            });
        }
    }
    // Product modulus identity.
    for (double pv : {1.0, 2.0, 3.0}) {
        const Exponent p(pv);
        const ojson in{{"p", pv}, {"N", 16}};
        guarded(rep, "product_modulus", "omega(f;u,v)_p = omega(g;u)_p omega(h;v)_p", in, [&] {
            Rng rng(cfg.seed * 1000003ULL + 6);
            const Grid1 g = random_piecewise_linear(rng, 16, 5);
            const Grid1 h = random_piecewise_constant(rng, 16, 5);
            const auto t = modulus_mixed(gen_product(g, h), p);
            const auto tg = modulus_1d(g, p), th = modulus_1d(h, p);
            MarginReport r;
            r.id = "product_modulus";
            for (std::size_t k = 0; k <= 16; ++k)
                for (std::size_t l = 0; l <= 16; ++l) {
                    const double want = tg[k] * th[l];
                    r.add(std::to_string(k) + "," + std::to_string(l), std::abs(t(k, l) - want),
                          1e-12 * std::max(1.0, want));
                }
            rep.add(r, "omega(f;u,v)_p = omega(g;u)_p omega(h;v)_p", in);
        });
    }
}

inline void suite_chain(const SuiteConfig& cfg, CheckReport& rep, const std::vector<Sample2>& c2) {
    for (const auto& s : c2) {
        for (double pv : cfg.p_grid) {
            const auto in = describe(s, pv);
            guarded(rep, "integral_chain", "K_p(f) <= (4/p') I_p(f); J_p(f) <= 3 K_p(f)", in, [&] {
                rep.add(chain_check(s.f, Exponent(pv), cfg.cap_override),
                        "K_p(f) <= (4/p') I_p(f); omega(f;1,1)_p <= (4/p'^2) I_p(f); J_p(f) <= 3 K_p(f)", in);
            });
        }
    }
}

inline void suite_hardy_littlewood(const SuiteConfig& cfg, CheckReport& rep) {
    const std::size_t n = cfg.hardy_littlewood_size;
    const ojson in{{"family", "t1xt1"}, {"N", n}};
    guarded(rep, "hardy_littlewood_gap", "v_1^(2)(g) = sup omega(f;u,v)_1 / (uv)", in, [&] {
        const auto r = hardy_littlewood_check(sine_product(1, 1, n), cfg.cap_override);
        rep.add(r.below, "omega(f;u,v)_1 <= v_1^(2)(f) u v", in);
        rep.add("hardy_littlewood_gap", "v_1^(2)(g) = sup omega(f;u,v)_1 / (uv)", in, r.relative_gap(), 0.05, 0.0);
    });
    const ojson cin{{"family", "cumulative"}, {"N", 16}};
    guarded(rep, "hardy_littlewood_cumulative", "v_1^(2)(F) = int int |f|", cin, [&] {
        Rng rng(cfg.seed * 1000003ULL + 7);
        const Grid2 g = random_mean_zero(rng, 16, 16);
        const auto r = hardy_littlewood_check(gen_cumulative(g));
        rep.add(r.below, "omega(f;u,v)_1 <= v_1^(2)(f) u v", cin);
        rep.add("hardy_littlewood_cumulative", "v_1^(2)(F) = int int |f|", cin,
                std::abs(r.variation - lp_norm(g, Exponent(1.0))), 1e-12, 0.0);
    });
}

inline void suite_main_estimate(const SuiteConfig& cfg, CheckReport& rep, const std::vector<Sample1>& c1,
                                const std::vector<Sample2>& c2) {
    const char* anchor =
        "v_p^(2)(g) <= A [omega(f;1,1)_p + K_p(f)/(pp') + I_p(f)/(pp')^2]; "
        "||f||_inf <= A [||f||_p + J_p(f)/(pp') + I_p(f)/(pp')^2]";
    for (const auto& s : c2) {
        for (double pv : cfg.p_grid) {
            const auto in = describe(s, pv);
            guarded(rep, "main_estimate", anchor, in, [&] {
                const auto r = main_estimate_check(s.f, Exponent(pv), cfg.cap_override);
                Check c;
                c.id = "main_estimate";
                c.anchor = anchor;
                c.inputs = in;
                c.inputs["A_obs"] = r.variation_form.value;
                c.inputs["A_obs_inf"] = r.sup_form.value;
                c.inputs["skipped"] = r.variation_form.skipped;
                c.inputs["omega11"] = r.bracket.omega11;
                c.inputs["K_term"] = r.bracket.k_term;
                c.inputs["I_term"] = r.bracket.i_term;
                c.lhs = r.vitali_lower;
                c.rhs = r.bracket.total();
                c.pass = r.variation_form.finite() && r.sup_form.finite();
                rep.add(std::move(c));
            });
        }
    }
    const char* anchor1 =
        "||f||_inf <= A [||f||_p + (1/pp') int t^(-1/p) omega(f;t)_p dt/t]; "
        "v_p(fbar) <= A [omega(f;1)_p + (1/pp') int t^(-1/p) omega(f;t)_p dt/t]";
    for (const auto& s : c1) {
        for (double pv : cfg.p_grid) {
            const auto in = describe(s, pv);
            guarded(rep, "embedding_1d", anchor1, in, [&] {
                const auto r = embedding_1d_check(s.g, Exponent(pv));
                Check c;
                c.id = "embedding_1d";
                c.anchor = anchor1;
                c.inputs = in;
                c.inputs["A_obs_inf"] = r.sup_form.value;
                c.inputs["A_obs_var"] = r.variation_form.value;
                c.inputs["skipped"] = r.variation_form.skipped;
                c.lhs = r.variation_form.lhs;
                c.rhs = r.variation_form.bracket;
                c.pass = r.sup_form.finite() && r.variation_form.finite();
                rep.add(std::move(c));
            });
        }
    }
}

inline void suite_wp(const SuiteConfig& cfg, CheckReport& rep, const std::vector<Sample2>& c2) {
    const char* anchor = "W_p(fbar) <= A [omega(f;1,1)_p + K_p(f)/(pp') + I_p(f)/(pp')^2]";
    for (const auto& s : c2) {
        for (double pv : {1.1, 2.0, 8.0}) {
            const auto in = describe(s, pv);
            guarded(rep, "wp_estimate", anchor, in, [&] {
                const auto r = W_p_estimate_check(s.f, Exponent(pv), cfg.cap_override);
                Check c;
                c.id = "wp_estimate";
                c.anchor = anchor;
                c.inputs = in;
                c.inputs["A_obs"] = r.constant.value;
                c.inputs["skipped"] = r.constant.skipped;
                c.lhs = r.wp;
                c.rhs = r.bracket.total();
                c.pass = r.constant.finite();
                rep.add(std::move(c));
            });
        }
    }
    // Staircase: Hardy bound on offset nets grows, sections stay at 2^(1/p).
    for (double pv : {1.0, 2.0, 3.0}) {
        const Exponent p(pv);
        const ojson in{{"family", "staircase"}, {"N", 32}, {"p", pv}};
        guarded(rep, "staircase_net_bound", "v_p^(2)(f;N_n) >= n^(1/p)", in, [&] {
            MarginReport r;
            r.id = "staircase_net_bound";
            const Grid2 f = gen_staircase(32);
            for (std::size_t n : {2, 4, 8, 16})
                r.add("n=" + std::to_string(n), std::pow(static_cast<double>(n), 1.0 / pv),
                      staircase_net_bound(f, n, p));
            rep.add(r, "v_p^(2)(f;N_n) >= n^(1/p)", in);
            // W_p is bounded under refinement.
            MarginReport w;
            w.id = "staircase_wp_bounded";
            const double base = W_p(gen_staircase(16), p);
            for (std::int64_t size : {32, 64}) w.add("N=" + std::to_string(size), W_p(gen_staircase(size), p), base);
            rep.add(w, "v_p(f_x) = v_p(f_y) = 2^(1/p)", in);
        });
    }
    // Series construction at p = 2.
    {
        const Exponent p(2.0);
        const ojson in{{"family", "series"}, {"N", 128}, {"p", 2}};
        guarded(rep, "series_profile_growth", "v_p(f_x) = 0 for x = 2^-k", in, [&] {
            MarginReport growth, bounded;
            growth.id = "series_profile_growth";
            bounded.id = "series_vitali_bounded";
            for (int M = 1; M <= 5; ++M) {
                const Grid2 f = gen_series_f(M, p, 128).grid;
                const auto phi = phi_profile(f, p);
                double amp = std::numeric_limits<double>::infinity();
                for (int k = 1; k <= M; ++k) amp = std::min(amp, phi.values[static_cast<std::size_t>(3 * 128 >> (k + 1))]);
                growth.add("M=" + std::to_string(M), 0.9 * amp * std::pow(2.0 * M, 0.5), pvar(phi.values, p));
                const double lower = vitali_ascent(f, p, 50, {}).value;
                bounded.add("M=" + std::to_string(M), lower, series_vitali_bound(p));
            }
            rep.add(growth, "v_p(f_x) = 0 for x = 2^-k; f_x(y) = 2^(-k/p-2) phi(2^k y) at midpoints", in);
            rep.add(bounded, "v_p^(2)(f;N)^p <= 2 c_p", in);
        });
    }
}

inline void suite_sharpness(const SuiteConfig& cfg, CheckReport& rep) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    {
        const std::vector<double> ps{1.01, 1.1, 1.5};
        const ojson in{{"family", "t1xt1"}, {"p", ps}};
        guarded(rep, "sharpness_p_to_1", "I_p(f) <= 4 pi^2 (p')^2; v_p^(2)(f) >= 1", in, [&] {
            auto rows = sharpness_sweep(SweepFamily::t1xt1, ps, {1});
            MarginReport ib, vb;
            ib.id = "sharpness_I_bound";
            vb.id = "sharpness_vitali_lower";
            for (const auto& r : rows) {
                const double pc = Exponent(r.p).conj();
                ib.add("p=" + format_double(r.p), r.get("I_hi"), 4.0 * pi2 * pc * pc);
                vb.add("p=" + format_double(r.p), 1.0, r.get("vitali_lower"));
            }
            rep.add(ib, "I_p(f) <= 4 pi^2 (p')^2", in);
            rep.add(vb, "v_p^(2)(f) >= 1 for all p >= 1", in);
            rep.sweeps.insert(rep.sweeps.end(), rows.begin(), rows.end());
        });
    }
    {
        const std::vector<double> ps{10.0, 50.0};
        const ojson in{{"family", "t1xt1"}, {"p", ps}};
        guarded(rep, "sharpness_p_to_inf", "(1/p) K_p(f) <= 16 pi^2 / p", in, [&] {
            auto rows = sharpness_sweep(SweepFamily::t1xt1, ps, {1});
            MarginReport kb, vb;
            kb.id = "sharpness_KI_bound";
            vb.id = "sharpness_vitali_lower";
            for (const auto& r : rows) {
                kb.add("K p=" + format_double(r.p), r.get("K_hi"), 16.0 * pi2 * r.p);
                kb.add("I p=" + format_double(r.p), r.get("I_hi"), 16.0 * pi2 * r.p * r.p);
                vb.add("p=" + format_double(r.p), 1.0, r.get("vitali_lower"));
            }
            rep.add(kb, "(1/p) K_p(f) <= 16 pi^2 / p; (1/p^2) I_p(f) <= 16 pi^2 / p^2", in);
            rep.add(vb, "v_p^(2)(f) >= 1 for all p >= 1", in);
            rep.sweeps.insert(rep.sweeps.end(), rows.begin(), rows.end());
        });
    }
    {
        const std::vector<double> ps{1.0, 2.0, 4.0, 8.0};
        const ojson in{{"family", "trigpoly"}, {"p", ps}, {"n", {1, 2, 3, 4}}};
        guarded(rep, "oskolkov_ratio", "v_p^(2)(T_nm) <= A (nm)^(1/p) ||T_nm||_p", in, [&] {
            auto rows = sharpness_sweep(SweepFamily::trigpoly, ps, {1, 2, 3, 4}, 64, cfg.seed, false);
            for (auto fam : {SweepFamily::tnxt1, SweepFamily::tnxtn}) {
                auto more = sharpness_sweep(fam, ps, {1, 2, 3, 4}, 64, cfg.seed, false);
                rows.insert(rows.end(), more.begin(), more.end());
            }
            MarginReport r;
            r.id = "oskolkov_ratio";
            for (const auto& row : rows) {
                const double ratio = row.get("oskolkov_ratio");
                r.add(row.family + " p=" + format_double(row.p) + " n=" + std::to_string(row.n) +
                          " m=" + format_double(row.get("m")),
                      std::isfinite(ratio) ? ratio : std::numeric_limits<double>::infinity(), kOskolkovCeiling);
            }
            rep.add(r, "v_p^(2)(T_nm) <= A (nm)^(1/p) ||T_nm||_p", in);
            rep.sweeps.insert(rep.sweeps.end(), rows.begin(), rows.end());
        });
    }
}

}  // namespace detail

inline CheckReport run_suite(const SuiteConfig& cfg) {
    cfg.validate();
    CheckReport rep;
    rep.seed = cfg.seed;
    rep.timestamp = cfg.timestamp;
    if (cfg.families.empty()) return rep;

    Rng rng(cfg.seed);
    const auto c1 = corpus_1d(cfg, rng);
    const auto c2 = corpus_2d(cfg, rng);
    auto wants = [&](const char* s) { return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end(); };

    if (wants("sanity")) detail::suite_sanity(cfg, rep);
    if (wants("pvar-oracle")) detail::suite_pvar_oracle(cfg, rep);
    if (wants("vitali-oracle")) detail::suite_vitali_oracle(cfg, rep);
    if (wants("golubov")) detail::suite_golubov(cfg, rep);
    if (wants("modulus")) detail::suite_modulus(cfg, rep, c1, c2);
    if (wants("lemmas")) detail::suite_lemmas(cfg, rep, c2);
    if (wants("chain")) detail::suite_chain(cfg, rep, c2);
    if (wants("hardy-littlewood")) detail::suite_hardy_littlewood(cfg, rep);
    if (wants("main-estimate")) detail::suite_main_estimate(cfg, rep, c1, c2);
    if (wants("wp")) detail::suite_wp(cfg, rep, c2);
    if (wants("sharpness")) detail::suite_sharpness(cfg, rep);
    if (cfg.inject_failure) {
        rep.add("synthetic_failure", "synthetic check, always fails", {{"synthetic", true}}, 1.0, 0.0, 0.0);
    }
    return rep;
}

}  // namespace pvarlab
