#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "pvarlab/harness.hpp"

using namespace pvarlab;

namespace {

const CheckReport& default_report() {
    static const CheckReport r = run_suite(SuiteConfig{});
    return r;
}

}  // namespace

TEST(Rng, SeededAndQuantized) {
    Rng a(42), b(42);
    for (int k = 0; k < 100; ++k) {
        const double x = a.value();
        EXPECT_EQ(x, b.value());
        EXPECT_EQ(x, Rng::quantize(x));
        EXPECT_EQ(std::ldexp(x, 20), std::round(std::ldexp(x, 20)));
    }
}

TEST(RandomFields, NotConstant) {
    Rng rng(1);
    for (int rep = 0; rep < 50; ++rep) {
        EXPECT_GT(pvar(random_piecewise_linear(rng, 32, 4), Exponent(1.0)), 0.0);
        EXPECT_GT(pvar(random_piecewise_constant(rng, 32, 4), Exponent(1.0)), 0.0);
    }
}

TEST(RandomFields, MeanZeroHasVanishingMeans) {
    Rng rng(2);
    const auto f = random_mean_zero(rng, 8, 8);
    EXPECT_NO_THROW(gen_cumulative(f));
}

TEST(RunSuite, DefaultConfigPasses) {
    const auto& r = default_report();
    EXPECT_TRUE(r.all_pass());
    EXPECT_EQ(r.exit_code(), 0);
    std::set<std::string> ids;
    for (const auto& c : r.checks) {
        EXPECT_FALSE(c.anchor.empty()) << c.id;
        EXPECT_TRUE(c.pass) << c.id << " " << c.inputs.dump();
        ids.insert(c.id);
    }
    for (const char* id : {"pvar_oracle", "golubov_identity", "integral_chain", "hardy_littlewood_gap",
                           "staircase_net_bound", "oskolkov_ratio"})
        EXPECT_TRUE(ids.count(id)) << id;
    EXPECT_FALSE(r.sweeps.empty());
}

TEST(RunSuite, ReportSchema) {
    const auto j = default_report().to_json();
    EXPECT_EQ(j["meta"]["version"], kVersion);
    EXPECT_EQ(j["meta"]["seed"], 7);
    ASSERT_FALSE(j["checks"].empty());
    for (const char* key : {"id", "paper_anchor", "inputs", "lhs", "rhs", "margin", "pass"})
        EXPECT_TRUE(j["checks"][0].contains(key)) << key;
    for (const char* key : {"family", "p", "n", "values"}) EXPECT_TRUE(j["sweeps"][0].contains(key)) << key;
}

TEST(RunSuite, Deterministic) {
    SuiteConfig cfg;
    cfg.suites = {"sanity", "pvar-oracle", "lemmas"};
    EXPECT_EQ(run_suite(cfg).to_json().dump(2), run_suite(cfg).to_json().dump(2));
}

TEST(RunSuite, InjectedFailureGivesExitOne) {
    SuiteConfig cfg;
    cfg.suites = {"sanity"};
    cfg.inject_failure = true;
    const auto r = run_suite(cfg);
    EXPECT_FALSE(r.all_pass());
    EXPECT_EQ(r.failures(), 1u);
    EXPECT_EQ(r.exit_code(), 1);
}

TEST(RunSuite, EmptyFamiliesGiveEmptyReport) {
    SuiteConfig cfg;
    cfg.families.clear();
    const auto r = run_suite(cfg);
    EXPECT_TRUE(r.checks.empty());
    EXPECT_EQ(r.exit_code(), 0);
}

TEST(SuiteConfig, Validation) {
    SuiteConfig a;
    a.vitali_oracle_size = 8;
    EXPECT_THROW(a.validate(), ConfigError);
    SuiteConfig b;
    b.pvar_oracle_size = 19;
    EXPECT_THROW(b.validate(), ConfigError);
    SuiteConfig c;
    c.suites = {"nope"};
    EXPECT_THROW(c.validate(), ConfigError);
    SuiteConfig d;
    d.p_grid = {1.0};
    EXPECT_THROW(d.validate(), ConfigError);
    SuiteConfig e;
    e.size_2d = 256;
    EXPECT_THROW(e.validate(), ConfigError);
    e.cap_override = true;
    EXPECT_NO_THROW(e.validate());
    EXPECT_THROW(run_suite(a), ConfigError);
}

TEST(HardyLittlewood, SineProductAndZero) {
    const auto r = hardy_littlewood_check(sine_product(1, 1, 64));
    EXPECT_TRUE(r.below.pass());
    EXPECT_LE(r.relative_gap(), 0.05);
    const auto z = hardy_littlewood_check(Grid2::zeros(8, 8));
    EXPECT_EQ(z.sup_ratio, 0.0);
    EXPECT_EQ(z.variation, 0.0);
}

TEST(HardyLittlewood, CumulativeField) {
    Rng rng(3);
    const auto g = random_mean_zero(rng, 16, 16);
    double mean_abs = 0.0;
    for (double v : g.data()) mean_abs += std::abs(v);
    mean_abs /= 256.0;
    const auto r = hardy_littlewood_check(gen_cumulative(g));
    EXPECT_NEAR(r.variation, mean_abs, 1e-12);
    EXPECT_TRUE(r.below.pass());
}

TEST(Embedding1D, SineConstantsBoundedAcrossN) {
    const Exponent p(2.0);
    double lo = 1e300, hi = 0.0;
    for (int n : {1, 2, 4, 8}) {
        const auto r = embedding_1d_check(gen_sine(n, 256), p);
        EXPECT_TRUE(std::isfinite(r.variation_form.value));
        lo = std::min(lo, r.variation_form.value);
        hi = std::max(hi, r.variation_form.value);
    }
    EXPECT_LT(hi / lo, 4.0);
    EXPECT_TRUE(embedding_1d_check(Grid1({1, 1, 1, 1}), p).variation_form.skipped);
    for (int n : {2, 4, 8, 16}) EXPECT_TRUE(std::isfinite(embedding_1d_check(gen_tent_scaled(n, 256), p).variation_form.value));
}

TEST(MainEstimate, SineProducts) {
    for (double pv : {1.1, 2.0, 10.0}) {
        const auto r = main_estimate_check(sine_product(1, 1, 32), Exponent(pv));
        EXPECT_TRUE(std::isfinite(r.variation_form.value));
        EXPECT_GT(r.variation_form.value, 0.0);
    }
    // Truncated at 1/N the certified I term shrinks like (p-1)^2 as p -> 1;
    // the dominance only shows once the model tails below 1/N are added.
    const Exponent near_one(1.1);
    const auto t = modulus_mixed(sine_product(1, 1, 32), near_one);
    const auto I = integral_I(t), K = integral_K(t);
    const double c = near_one.inv_p_pconj();
    const double i_term = c * c * (I.hi + *I.tail), k_term = c * (K.hi + *K.tail);
    EXPECT_GT(i_term, k_term);
    EXPECT_GT(i_term, t(t.rows, t.cols));
    EXPECT_TRUE(main_estimate_check(Grid2::zeros(8, 8), Exponent(2.0)).variation_form.skipped);
    double hi = 0.0, lo = 1e300;
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto f = sine_product(n, 1, aligned_size(4 * n, 32));
        const double a = main_estimate_check(f, Exponent(4.0)).variation_form.value;
        hi = std::max(hi, a);
        lo = std::min(lo, a);
    }
    EXPECT_LT(hi / lo, 4.0);
}

TEST(SeriesBound, Value) {
    EXPECT_NEAR(series_vitali_bound(Exponent(2.0)), std::sqrt(6.0), 1e-15);
    EXPECT_THROW(series_vitali_bound(Exponent(1.0)), std::domain_error);
}

TEST(SharpnessSweep, RowsAndCsv) {
    const auto rows = sharpness_sweep(SweepFamily::t1xt1, {2.0}, {1});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_GE(rows[0].get("vitali_lower"), 1.0);
    EXPECT_TRUE(std::isnan(rows[0].get("missing")));
    std::ostringstream s;
    write_sweep_csv(s, rows);
    EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "family,p,n,key,value");
    EXPECT_THROW(parse_sweep_family("bogus"), ConfigError);
    EXPECT_EQ(parse_sweep_family("tnxtn"), SweepFamily::tnxtn);
}
