#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "pvarlab/harness.hpp"
#include "pvarlab/modulus.hpp"
#include "pvarlab/vitali2d.hpp"

using namespace pvarlab;

namespace {

Grid1 step(std::size_t N) {
    std::vector<double> v(N);
    for (std::size_t k = 0; k < N; ++k) v[k] = k < N / 2 ? 1.0 : -1.0;
    return Grid1(std::move(v));
}

}  // namespace

TEST(LpNorm, Examples) {
    EXPECT_NEAR(lp_norm(gen_sine(1, 4), Exponent(2.0)), std::sqrt(2.0) / 2, 1e-15);
    for (double pv : {1.0, 2.0, 5.0}) EXPECT_NEAR(lp_norm(Grid1({-3, -3, -3}), Exponent(pv)), 3.0, 1e-15);
    const Exponent p(3.0);
    const double base = lp_norm(gen_sine(1, 16), p);
    for (int n : {2, 4, 8}) EXPECT_NEAR(lp_norm(gen_sine(n, 16 * n), p), base, 1e-14);
}

TEST(MixedDiffNorm, Examples) {
    Rng rng(1);
    const auto f = random_grid2(rng, 6, 8);
    EXPECT_EQ(mixed_diff_norm(f, 0, 3, Exponent(2.0)), 0.0);
    EXPECT_EQ(mixed_diff_norm(f, 2, 0, Exponent(2.0)), 0.0);
    EXPECT_EQ(mixed_diff_norm(f, 6, 8, Exponent(2.0)), 0.0);
    const Grid2 checker(2, 2, {1, 0, 0, 1});
    EXPECT_EQ(mixed_diff_norm(checker, 1, 1, Exponent(1.0)), 2.0);
    EXPECT_THROW(mixed_diff_norm(f, 7, 1, Exponent(1.0)), std::invalid_argument);
}

TEST(MixedDiffNorm, ProductFactorizes) {
    Rng rng(2);
    const auto g = random_grid1(rng, 8), h = random_grid1(rng, 10);
    const auto f = gen_product(g, h);
    const Exponent p(1.5);
    const auto ng = shift_norms_1d(g, p), nh = shift_norms_1d(h, p);
    for (std::size_t s = 0; s < 8; ++s)
        for (std::size_t t = 0; t < 10; ++t)
            EXPECT_NEAR(mixed_diff_norm(f, s, t, p), ng[s] * nh[t], 1e-12);
}

TEST(Modulus1D, StepFunction) {
    const std::size_t N = 32;
    const auto t = modulus_1d(step(N), Exponent(1.0));
    ASSERT_EQ(t.resolution(), N);
    for (std::size_t k = 0; k <= N / 2; ++k) EXPECT_NEAR(t[k], 4.0 * k / N, 1e-14);
    for (std::size_t k = N / 2; k <= N; ++k) EXPECT_NEAR(t[k], 2.0, 1e-14);
}

TEST(Modulus1D, SineBound) {
    for (int n : {1, 2, 4, 8}) {
        for (double pv : {1.0, 2.0, 4.0}) {
            const auto t = modulus_1d(gen_sine(n, 128), Exponent(pv));
            for (std::size_t k = 0; k <= 128; ++k)
                EXPECT_LE(t[k], 2 * std::numbers::pi * std::min(1.0, n * t.argument(k)) * (1 + 1e-12));
        }
    }
}

TEST(Modulus1D, ConstantAndInvariants) {
    for (double v : modulus_1d(Grid1({2, 2, 2, 2}), Exponent(2.0)).values) EXPECT_EQ(v, 0.0);
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        const auto g = random_piecewise_constant(rng, 64, 6);
        for (double pv : {1.0, 1.5, 3.0}) {
            const Exponent p(pv);
            EXPECT_TRUE(table_invariants_check(modulus_1d(g, p)).pass());
            EXPECT_TRUE(averaged_modulus_check(g, p).pass());
            EXPECT_TRUE(omega_sandwich_check(g, p).pass());
            for (std::size_t h : {0u, 1u, 5u, 32u}) EXPECT_TRUE(diff_modulus_bound_check(g, h, p).pass());
        }
    }
}

TEST(Modulus1D, ShiftExactness) {
    Rng rng(4);
    const auto g = random_grid1(rng, 24);
    const Exponent p(2.0);
    const auto norms = shift_norms_1d(g, p);
    for (std::size_t s = 0; s < 24; ++s) {
        std::vector<double> shifted(24);
        for (std::size_t i = 0; i < 24; ++i) shifted[i] = g[(i + s) % 24];
        std::vector<double> d(24);
        for (std::size_t i = 0; i < 24; ++i) d[i] = shifted[i] - g[i];
        EXPECT_EQ(norms[s], lp_norm(std::span<const double>(d), p)) << s;
    }
}

TEST(AveragedModulus, StepMargins) {
    const std::size_t N = 16;
    const auto r = averaged_modulus_check(step(N), Exponent(1.0));
    EXPECT_TRUE(r.pass());
    for (std::size_t k = 1; k <= N / 2; ++k) {
        const double delta = static_cast<double>(k) / N;
        EXPECT_NEAR(r.entries[k - 1].lhs, 4 * delta, 1e-14);
        EXPECT_NEAR(r.entries[k - 1].rhs, 6 * delta, 1e-14);
    }
    const auto c = averaged_modulus_check(Grid1({1, 1, 1, 1}), Exponent(2.0));
    for (const auto& e : c.entries) {
        EXPECT_EQ(e.lhs, 0.0);
        EXPECT_EQ(e.rhs, 0.0);
    }
}

TEST(AveragedModulus, RandomGrids) {
    Rng rng(5);
    for (int rep = 0; rep < 10; ++rep) EXPECT_TRUE(averaged_modulus_check(random_grid1(rng, 64), Exponent(2.0)).pass());
}

TEST(ModulusIso, ConstantSeparableAndDoubling) {
    for (double v : modulus_iso_2d(Grid2(3, 3, std::vector<double>(9, 5.0)), Exponent(2.0)).values) EXPECT_EQ(v, 0.0);
    Rng rng(6);
    const auto g = random_grid1(rng, 16);
    const auto f = gen_product(g, Grid1(std::vector<double>(16, 1.0)));
    const Exponent p(1.5);
    const auto iso = modulus_iso_2d(f, p);
    const auto one = modulus_1d(g, p);
    ASSERT_EQ(iso.resolution(), one.resolution());
    for (std::size_t k = 0; k <= 16; ++k) EXPECT_NEAR(iso[k], one[k], 1e-12);
    for (int rep = 0; rep < 5; ++rep) {
        const auto r = random_grid2(rng, 12, 12);
        EXPECT_TRUE(table_invariants_check(modulus_iso_2d(r, p)).pass());
    }
}

TEST(ModulusMixed, ProductIdentity) {
    Rng rng(7);
    const auto g = random_grid1(rng, 8), h = random_grid1(rng, 12);
    const Exponent p(2.0);
    const auto t = modulus_mixed(gen_product(g, h), p);
    const auto tg = modulus_1d(g, p), th = modulus_1d(h, p);
    for (std::size_t k = 0; k <= 8; ++k)
        for (std::size_t l = 0; l <= 12; ++l) EXPECT_NEAR(t(k, l), tg[k] * th[l], 1e-12);
}

TEST(ModulusMixed, ZeroAndCap) {
    for (double v : modulus_mixed(Grid2::zeros(4, 6), Exponent(2.0)).values) EXPECT_EQ(v, 0.0);
    EXPECT_THROW(modulus_mixed(Grid2::zeros(kMixedTableCap + 1, 4), Exponent(2.0)), std::invalid_argument);
    EXPECT_NO_THROW(modulus_mixed(Grid2::zeros(kMixedTableCap + 2, 2), Exponent(2.0), true));
}

TEST(ModulusMixed, InvariantsAndVariationBound) {
    Rng rng(8);
    for (int rep = 0; rep < 10; ++rep) {
        const auto f = random_grid2(rng, 6, 6);
        for (double pv : {1.0, 2.0, 3.0}) {
            const Exponent p(pv);
            const auto t = modulus_mixed(f, p);
            EXPECT_TRUE(table_invariants_check(t).pass());
            EXPECT_TRUE(golubov_modulus_check(t, vitali_oracle(f, p)).pass());
        }
    }
}

TEST(DiffModulusBound, Examples) {
    Rng rng(9);
    for (int rep = 0; rep < 5; ++rep) {
        const auto f = random_grid2(rng, 16, 16);
        for (double pv : {1.5, 2.0})
            for (std::size_t h : {1u, 4u, 9u}) EXPECT_TRUE(diff_modulus_bound_check(f, h, Exponent(pv)).pass());
    }
    const auto f = random_grid2(rng, 8, 8);
    const auto r = diff_modulus_bound_check(f, 0, Exponent(2.0));
    for (const auto& e : r.entries) EXPECT_EQ(e.lhs, 0.0);
    const auto prod = gen_product(gen_sine(1, 8), gen_sine(2, 8));
    EXPECT_TRUE(diff_modulus_bound_check(prod, 2, Exponent(2.0)).pass());
    EXPECT_THROW(diff_modulus_bound_check(f, 9, Exponent(2.0)), std::invalid_argument);
}

TEST(ModulusCsv, Format) {
    std::ostringstream s;
    write_table_csv(s, modulus_1d(Grid1({0, 1}), Exponent(1.0)));
    EXPECT_EQ(s.str().substr(0, s.str().find('\n')), "k,delta,value");
    std::ostringstream s2;
    write_table_csv(s2, modulus_mixed(Grid2::zeros(2, 2), Exponent(1.0)));
    EXPECT_EQ(s2.str().substr(0, s2.str().find('\n')), "k,l,value");
}
