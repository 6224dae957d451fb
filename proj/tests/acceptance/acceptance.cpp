// One PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pvarlab/pvarlab.hpp"

using namespace pvarlab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

bool rel_equal(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// -- AC1 --------------------------------------------------------------------
Outcome ac1() {
    const auto t0 = Clock::now();
    Rng rng(20240101);
    std::size_t mismatches = 0, total = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 2 + rng.below(11);
        const auto g = rep % 2 ? random_grid1(rng, n) : random_piecewise_constant(rng, n, 4);
        for (double pv : {1.0, 1.5, 2.0, 3.0}) {
            const Exponent p(pv);
            ++total;
            if (pvar(g, p) != pvar_oracle(g, p)) ++mismatches;
        }
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 10.0,
            std::to_string(total) + " comparisons, " + std::to_string(mismatches) + " mismatches, " +
                fmt("%.2f s", secs)};
}

// -- AC2 --------------------------------------------------------------------
Outcome ac2() {
    double worst = 0.0;
    for (double pv : {1.0, 1.5, 2.0, 3.0}) {
        for (int n : {1, 2, 4, 8}) {
            const double want = std::pow(2.0, 1.0 / pv - 1.0) * std::pow(static_cast<double>(n), 1.0 / pv);
            for (std::int64_t per : {2, 8, 32}) {
                worst = std::max(worst, std::abs(pvar(gen_tent_scaled(n, 2 * per * n), Exponent(pv)) - want));
            }
        }
    }
    return {worst <= 1e-12, fmt("max abs error %.3g", worst)};
}

// -- AC3 --------------------------------------------------------------------
Outcome ac3() {
    const auto t0 = Clock::now();
    Outcome out;
    std::ostringstream d;
    Rng rng(31337);
    std::size_t overshoot = 0;
    for (double pv : {1.5, 2.0, 3.0}) {
        const Exponent p(pv);
        std::size_t equal = 0;
        const std::size_t count = 500;
        for (std::size_t k = 0; k < count; ++k) {
            const auto f = random_grid2(rng, 6, 6);
            const double o = vitali_oracle(f, p);
            const double a = vitali_ascent(f, p).value;
            if (a > o) ++overshoot;
            if (rel_equal(a, o, 1e-12)) ++equal;
        }
        const double rate = static_cast<double>(equal) / static_cast<double>(count);
        if (rate < 0.99) out.pass = false;
        d << "p=" << pv << " agree " << equal << "/" << count << "; ";
    }
    std::size_t product_bad = 0;
    for (int k = 0; k < 60; ++k) {
        const auto g = random_grid1(rng, 6), h = random_grid1(rng, 6);
        const auto f = gen_product(g, h);
        for (double pv : {1.5, 2.0, 3.0}) {
            const Exponent p(pv);
            const double o = vitali_oracle(f, p);
            const double a = vitali_ascent(f, p).value;
            if (a > o) ++overshoot;
            if (!rel_equal(a, o, 1e-12)) ++product_bad;
        }
    }
    std::size_t finest_bad = 0;
    const Exponent one(1.0);
    for (int k = 0; k < 200; ++k) {
        const auto f = random_grid2(rng, 5, 5);
        if (vitali_finest(f, one) != vitali_oracle(f, one)) ++finest_bad;
    }
    const double secs = seconds_since(t0);
    d << "overshoot " << overshoot << ", product mismatches " << product_bad << "/180, p=1 finest mismatches "
      << finest_bad << "/200, " << fmt("%.1f s", secs);
    out.pass = out.pass && overshoot == 0 && product_bad == 0 && finest_bad == 0 && secs < 60.0;
    out.detail = d.str();
    return out;
}

// -- AC4 --------------------------------------------------------------------
Outcome ac4() {
    std::vector<Grid1> factors{gen_tent_scaled(1, 4), gen_tent_scaled(2, 4), gen_tent_scaled(1, 6),
                               gen_tent_scaled(3, 6), gen_sine(1, 4),         gen_tent_scaled(1, 2)};
    double worst = 0.0;
    std::size_t cases = 0;
    for (const auto& g : factors) {
        for (const auto& h : factors) {
            const auto f = gen_product(g, h);
            for (double pv : {1.0, 1.5, 2.0, 3.0}) {
                const Exponent p(pv);
                const double want = pvar(g, p) * pvar(h, p);
                worst = std::max(worst, std::abs(vitali_oracle(f, p) - want));
                worst = std::max(worst, std::abs(vitali_certified(f, p).lower - want));
                ++cases;
            }
        }
    }
    return {worst <= 1e-9, std::to_string(cases) + " products, " + fmt("max abs error %.3g", worst)};
}

// -- AC5 --------------------------------------------------------------------
Outcome ac5() {
    Rng rng(5150);
    std::vector<Grid2> corpus;
    for (std::size_t n : {2u, 4u, 7u, 8u, 16u, 24u, 32u}) corpus.push_back(random_mean_zero(rng, n, n));
    corpus.push_back(random_mean_zero(rng, 12, 32));
    for (std::size_t n : {8u, 16u, 32u}) corpus.push_back(decompose_lp0(random_block_field(rng, n, n, 5)).core);
    for (std::size_t n : {8u, 16u, 32u}) corpus.push_back(decompose_lp0(random_bilinear_field(rng, n, n, 5)).core);
    corpus.push_back(sine_product(1, 1, 32));
    corpus.push_back(sine_product(2, 3, 24));
    corpus.push_back(decompose_lp0(gen_staircase(32)).core);
    corpus.push_back(decompose_lp0(gen_trigpoly(random_trig_coefficients(rng, 3, 2), 32, 32).value).core);
    double worst = 0.0;
    for (const auto& f : corpus) {
        const double want = [&] {
            CompensatedSum s;
            for (double v : f.data()) s.add(std::abs(v));
            return s.value() / static_cast<double>(f.size());
        }();
        const double got = vitali_finest(gen_cumulative(f), Exponent(1.0));
        worst = std::max(worst, std::abs(got - want) / std::max(1.0, want));
    }
    return {worst <= 1e-12, std::to_string(corpus.size()) + " fields, " + fmt("max error %.3g", worst)};
}

// -- AC6 --------------------------------------------------------------------
Outcome ac6() {
    const auto a = hardy_littlewood_check(sine_product(1, 1, 64));
    const auto b = hardy_littlewood_check(sine_product(1, 1, 256), true);
    const bool pass = a.relative_gap() <= 0.05 && b.relative_gap() <= 0.02 && a.below.pass() && b.below.pass();
    std::ostringstream d;
    d << "N=64 gap " << fmt("%.4g", a.relative_gap()) << ", N=256 gap " << fmt("%.4g", b.relative_gap())
      << ", pointwise violations " << a.below.violations() + b.below.violations();
    return {pass, d.str()};
}

// -- corpus used by AC7 / AC8 ------------------------------------------------
SuiteConfig corpus_config() {
    SuiteConfig cfg;
    cfg.size_2d = 32;
    cfg.size_1d = 128;
    cfg.samples_per_family = 2;
    return cfg;
}

const std::vector<double> kPGrid{1.1, 1.5, 2.0, 3.0, 8.0};

// -- AC7 --------------------------------------------------------------------
Outcome ac7() {
    const auto cfg = corpus_config();
    Rng rng(cfg.seed);
    const auto corpus = corpus_2d(cfg, rng);
    std::size_t violations = 0, entries = 0;
    for (const auto& s : corpus) {
        for (double pv : kPGrid) {
            const auto r = chain_check(s.f, Exponent(pv));
            violations += r.violations();
            entries += r.entries.size();
        }
    }
    // Modulus against variation on oracle-sized grids.
    Rng small(77);
    for (int k = 0; k < 40; ++k) {
        const auto f = k % 2 ? random_grid2(small, 6, 6) : random_block_field(small, 6, 6, 3);
        for (double pv : {1.0, 1.1, 1.5, 2.0, 3.0, 8.0}) {
            const Exponent p(pv);
            const auto r = golubov_modulus_check(modulus_mixed(f, p), vitali_oracle(f, p));
            violations += r.violations();
            entries += r.entries.size();
        }
    }
    return {violations == 0, std::to_string(corpus.size()) + " corpus fields x " + std::to_string(kPGrid.size()) +
                                 " p + 40 oracle grids, " + std::to_string(entries) + " entries, " +
                                 std::to_string(violations) + " violations"};
}

// -- AC8 --------------------------------------------------------------------
Outcome ac8() {
    const auto cfg = corpus_config();
    Rng rng(cfg.seed);
    const auto c1 = corpus_1d(cfg, rng);
    const auto c2 = corpus_2d(cfg, rng);
    std::size_t violations = 0, entries = 0;
    auto take = [&](const MarginReport& r) {
        violations += r.violations();
        entries += r.entries.size();
    };
    for (const auto& s : c1) {
        for (double pv : {1.0, 1.1, 1.5, 2.0, 3.0, 8.0}) {
            const Exponent p(pv);
            take(table_invariants_check(modulus_1d(s.g, p)));
            take(averaged_modulus_check(s.g, p));
            take(omega_sandwich_check(s.g, p));
            for (std::size_t h : {1u, 3u, 16u}) take(diff_modulus_bound_check(s.g, h % s.g.size(), p));
        }
    }
    for (const auto& s : c2) {
        for (double pv : {1.0, 1.5, 2.0, 3.0, 8.0}) {
            const Exponent p(pv);
            take(table_invariants_check(modulus_mixed(s.f, p)));
            take(table_invariants_check(modulus_iso_2d(s.f, p), s.f.rows() == s.f.cols()));
            for (std::size_t h : {1u, 5u}) take(diff_modulus_bound_check(s.f, h, p));
        }
    }
    return {violations == 0, std::to_string(c1.size()) + " 1D + " + std::to_string(c2.size()) + " 2D fields, " +
                                 std::to_string(entries) + " entries, " + std::to_string(violations) +
                                 " violations"};
}

// -- AC9 --------------------------------------------------------------------
Outcome ac9() {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    bool pass = true;
    std::ostringstream d;
    double worst_p1 = 0.0;
    for (const auto& r : sharpness_sweep(SweepFamily::t1xt1, {1.01, 1.1, 1.5}, {1})) {
        const double pc = Exponent(r.p).conj();
        worst_p1 = std::max(worst_p1, r.get("I_hi") / (4 * pi2 * pc * pc));
        if (r.get("I_hi") > 4 * pi2 * pc * pc || r.get("vitali_lower") < 1.0) pass = false;
    }
    double worst_inf = 0.0;
    for (const auto& r : sharpness_sweep(SweepFamily::t1xt1, {10.0, 50.0}, {1})) {
        worst_inf = std::max({worst_inf, r.get("K_hi") / (16 * pi2 * r.p), r.get("I_hi") / (16 * pi2 * r.p * r.p)});
        if (r.get("K_hi") > 16 * pi2 * r.p || r.get("I_hi") > 16 * pi2 * r.p * r.p || r.get("vitali_lower") < 1.0)
            pass = false;
    }
    double osk = 0.0;
    for (const auto& r : sharpness_sweep(SweepFamily::trigpoly, {1.0, 2.0, 4.0, 8.0}, {1, 2, 3, 4}, 32, 7, false)) {
        const double v = r.get("oskolkov_ratio");
        if (!std::isfinite(v)) pass = false;
        osk = std::max(osk, v);
    }
    if (osk > kOskolkovCeiling) pass = false;
    d << "p->1 I/bound max " << fmt("%.3g", worst_p1) << ", p->inf K,I/bound max " << fmt("%.3g", worst_inf)
      << ", Oskolkov ratio max " << fmt("%.3g", osk) << " (ceiling " << fmt("%.4g", kOskolkovCeiling) << ")";
    return {pass, d.str()};
}

// -- AC10 -------------------------------------------------------------------
Outcome ac10() {
    bool pass = true;
    std::ostringstream d;
    // Staircase half.
    double wp_max = 0.0;
    bool net_ok = true;
    for (double pv : {1.0, 1.5, 2.0, 3.0}) {
        const Exponent p(pv);
        const auto f = gen_staircase(64);
        wp_max = std::max(wp_max, W_p(f, p));
        for (std::size_t n : {2u, 4u, 8u, 16u})
            if (staircase_net_bound(f, n, p) < std::pow(static_cast<double>(n), 1.0 / pv) * (1 - 1e-12)) net_ok = false;
    }
    if (wp_max != 0.0 || !net_ok) pass = false;
    d << "staircase W_p max " << fmt("%.4g", wp_max) << " (want 0), net bound " << (net_ok ? "ok" : "violated")
      << "; ";
    // Series half, p = 2.
    const Exponent p(2.0);
    const std::size_t N = 128;
    std::vector<double> finest, ascent;
    bool growth_ok = true;
    for (int M = 1; M <= 5; ++M) {
        const Grid2 f = gen_series_f(M, p, static_cast<std::int64_t>(N)).grid;
        finest.push_back(vitali_finest(f, p));
        ascent.push_back(vitali_ascent(f, p).value);
        const auto phi = phi_profile(f, p);
        double amp = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= M; ++k) amp = std::min(amp, phi.values[3 * N >> (k + 1)]);
        if (pvar(phi.values, p) < 0.9 * amp * std::sqrt(2.0 * M)) growth_ok = false;
    }
    const double step = finest[4] / finest[3] - 1.0;
    bool monotone = true;
    for (std::size_t k = 1; k < finest.size(); ++k)
        if (finest[k] < finest[k - 1]) monotone = false;
    if (!(monotone && step < 0.05) || !growth_ok) pass = false;
    d << "series finest M=1..5:";
    for (double v : finest) d << ' ' << fmt("%.4g", v);
    d << ", M=4->5 increase " << fmt("%.1f%%", 100 * step) << " (want < 5%); ascent M=5 " << fmt("%.4g", ascent[4])
      << " vs bound " << fmt("%.4g", series_vitali_bound(p)) << "; profile growth " << (growth_ok ? "ok" : "violated");
    return {pass, d.str()};
}

// -- AC11 -------------------------------------------------------------------
Outcome ac11() {
    // Even p keeps grid averages of |trig|^p exact once N exceeds p times the
    // degree, so coarse and fine tables agree at shared arguments.
    Rng rng(2718);
    std::vector<std::pair<std::string, std::function<Grid2(std::size_t)>>> smooth{
        {"t1xt1", [](std::size_t n) { return sine_product(1, 1, n); }},
        {"t2xt1", [](std::size_t n) { return sine_product(2, 1, n); }},
        {"t2xt2", [](std::size_t n) { return sine_product(2, 2, n); }},
    };
    for (int k = 0; k < 2; ++k) {
        const auto c = random_trig_coefficients(rng, 2, 2);
        smooth.emplace_back("trigpoly#" + std::to_string(k), [c](std::size_t n) {
            const auto s = static_cast<std::int64_t>(n);
            return gen_trigpoly(c, s, s).value;
        });
    }
    double worst_nest = 0.0, worst_ratio = 0.0;
    std::size_t pairs = 0;
    for (const auto& [name, make] : smooth) {
        for (double pv : {2.0, 4.0}) {
            const Exponent p(pv);
            for (std::size_t N : {16u, 32u}) {
                const Grid2 fc = decompose_lp0(make(N)).core, ff = decompose_lp0(make(2 * N)).core;
                const auto tc = modulus_mixed(fc, p), tf = modulus_mixed(ff, p);
                const auto ic = modulus_iso_2d(fc, p), iff = modulus_iso_2d(ff, p);
                const std::size_t u = N / 16;  // t0 = 1/16 on both grids
                const std::vector<std::pair<Enclosure, Enclosure>> encl{
                    {integral_J(ic, u), integral_J(iff, 2 * u)},
                    {integral_K(tc, u, u), integral_K(tf, 2 * u, 2 * u)},
                    {integral_I(tc, u, u), integral_I(tf, 2 * u, 2 * u)},
                };
                for (const auto& [c, f] : encl) {
                    const double slack = 1e-12 * std::max(1.0, c.hi);
                    worst_nest = std::max({worst_nest, c.lo - f.lo - slack, f.hi - c.hi - slack});
                    if (c.width() > 0) worst_ratio = std::max(worst_ratio, f.width() / c.width());
                    ++pairs;
                }
            }
        }
    }
    return {worst_nest <= 0.0 && worst_ratio <= 0.6,
            std::to_string(pairs) + " refinement pairs, nesting excess " + fmt("%.3g", std::max(0.0, worst_nest)) +
                ", max width ratio " + fmt("%.4f", worst_ratio)};
}

// -- AC12 -------------------------------------------------------------------
int run_cli(const std::vector<std::string>& args, std::ostream& err) {
    std::vector<const char*> argv{"pvarlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome ac12() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "pvarlab_acceptance";
    fs::create_directories(dir);
    const auto a = (dir / "report_a.json").string(), b = (dir / "report_b.json").string();
    std::ostringstream err;
    const int ca = run_cli({"verify", "--suite", "all", "--seed", "7", "--out", a}, err);
    const int cb = run_cli({"verify", "--suite", "all", "--seed", "7", "--out", b}, err);
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };
    const std::string ra = slurp(a), rb = slurp(b);
    const bool same = !ra.empty() && ra == rb;
    return {same && ca == 0 && cb == 0, "exit codes " + std::to_string(ca) + "," + std::to_string(cb) + ", " +
                                            std::to_string(ra.size()) + " bytes, " +
                                            (same ? "identical" : "different")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 pvar oracle equivalence", ac1},       {"AC2 tent formula", ac2},
        {"AC3 vitali oracle equivalence", ac3},     {"AC4 product identity", ac4},
        {"AC5 cumulative identity", ac5},           {"AC6 Hardy-Littlewood p=1", ac6},
        {"AC7 inequality chain", ac7},              {"AC8 modulus invariants", ac8},
        {"AC9 sharpness sweeps", ac9},              {"AC10 separation constructions", ac10},
        {"AC11 enclosure refinement", ac11},        {"AC12 report determinism", ac12},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
