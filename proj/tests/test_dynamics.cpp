#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bfns/dynamics.hpp"
#include "bfns/error.hpp"
#include "bfns/fields.hpp"
#include "support.hpp"

using namespace bfns;
using namespace bfns::test;

TEST(Cutoff, Examples) {
    EXPECT_EQ(f_cut(2.0, 1.0), 1.0);
    EXPECT_EQ(f_cut(2.0, 4.0), 0.5);
    EXPECT_EQ(f_cut(3.7, 3.7), 1.0);
    EXPECT_EQ(f_cut(2.0, 0.0), 1.0);
    EXPECT_EQ(f_cut(kInfiniteCutoff, 1e300), 1.0);
    EXPECT_THROW(f_cut(2.0, -1.0), ParameterError);
    EXPECT_THROW(f_cut(0.0, 1.0), ParameterError);
}

TEST(Cutoff, RangeAndProductBound) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> L(-3.0, 3.0);
    for (int i = 0; i < 100000; ++i) {
        const double n = std::pow(10.0, L(rng)), r = std::pow(10.0, L(rng));
        const double f = f_cut(n, r);
        ASSERT_GE(f, 0.0);
        ASSERT_LE(f, 1.0);
        ASSERT_LE(f * r, n * (1.0 + 1e-15));
    }
}

TEST(Rhs, ZeroStateGivesForcing) {
    SimConfig c = desk_config();
    c.forcing = low_mode_forcing(2, 16, 0.7);
    EXPECT_TRUE(rhs(SpectralField(2, 16), c).identical(c.forcing));
}

TEST(Rhs, InfiniteCutoffMatchesIndependentAssembly) {
    SimConfig c = desk_config();
    c.forcing = low_mode_forcing(2, 16, 0.3);
    const SpectralField u = solenoidal(2, 16, 4, 5.0);
    PseudoSpectral ws(2, 16, 64);
    SpectralField expect = -c.mu * stokes_apply(u);
    expect -= advection(u, u, ws);
    expect -= damping_term(u, c.beta, c.alpha, ws);
    expect += c.forcing;
    const SpectralField got = rhs(u, c);
    EXPECT_LE(max_abs_diff(got, expect), 1e-12 * max_abs_coefficient(expect));
}

TEST(Rhs, ActiveCutoffScalesDampingAndAdvection) {
    SimConfig c = desk_config();
    c.n_cut = 2.0;
    const SpectralField u = solenoidal(2, 16, 6, 8.0);
    const double vn = std::sqrt(v_norm_sq(u));
    ASSERT_GT(vn * vn, c.n_cut);  // beta = 3: damping argument ||u||^2
    PseudoSpectral ws(2, 16, 64);
    SpectralField expect = -c.mu * stokes_apply(u);
    expect.add_scaled(-std::min(1.0, c.n_cut / vn), advection(u, u, ws));
    expect.add_scaled(-(c.n_cut / (vn * vn)), damping_term(u, c.beta, c.alpha, ws));
    EXPECT_LE(max_abs_diff(rhs(u, c), expect), 1e-12 * max_abs_coefficient(expect));
}

TEST(Rhs, OutputIsValidField) {
    for (double beta : {1.0, 2.0, 2.5, 3.0, 4.0}) {
        SimConfig c = desk_config();
        c.beta = beta;
        c.n_cut = 3.0;
        c.forcing = low_mode_forcing(2, 16, 1.0);
        const SpectralField r = rhs(solenoidal(2, 16, 10, 4.0), c);
        EXPECT_FALSE(invariant_violation(r).has_value()) << beta;
    }
}

TEST(Rhs, CutoffConsistencyIsBitwise) {
    SimConfig c = desk_config();
    const SpectralField u = solenoidal(2, 16, 21, 3.0);
    const CutoffArguments a = cutoff_arguments(v_norm_sq(u), c.beta);
    SimConfig m = c;
    m.n_cut = std::max(a.advection, a.damping);
    EXPECT_TRUE(rhs(u, m).identical(rhs(u, c)));
    m.n_cut = 0.5 * std::max(a.advection, a.damping);
    EXPECT_FALSE(rhs(u, m).identical(rhs(u, c)));
}

TEST(Rhs, RecordsCutoffArgument) {
    SimConfig c = desk_config();
    RightHandSide r(c);
    const SpectralField u = solenoidal(2, 16, 2, 4.0);
    SpectralField out;
    const auto ev = r.nonlinear(u, out);
    const double vn = std::sqrt(v_norm_sq(u));
    EXPECT_NEAR(r.max_cutoff_argument(), std::max(vn, vn * vn), 1e-12 * vn * vn);
    EXPECT_EQ(ev.fn_advection, 1.0);
    EXPECT_EQ(ev.fn_damping, 1.0);
}

TEST(FnLipschitz, CaseOneIsExactlyZero) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        const SpectralField u = solenoidal(2, 8, s, 0.5), v = solenoidal(2, 8, s + 100, 0.3);
        const double n = 1.0 + std::max(v_norm_sq(u), v_norm_sq(v));
        const auto rep = verify_fn_lipschitz(u, v, 3.0, n, 1.0);
        EXPECT_EQ(rep.lemma_case, 1);
        EXPECT_EQ(rep.lhs, 0.0);
        EXPECT_TRUE(rep.holds);
    }
}

TEST(FnLipschitz, IdenticalFieldsGiveZero) {
    const SpectralField u = solenoidal(2, 8, 3, 20.0);
    const auto rep = verify_fn_lipschitz(u, u, 3.0, 1.0, 1.0);
    EXPECT_EQ(rep.lhs, 0.0);
}

TEST(FnLipschitz, FittedConstantAboveCutoff) {
    // both arguments above N; the lemma constant is existential, so only a
    // finite fitted ratio is checked
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(1.0, 3.0);
    const SpectralField a = solenoidal(2, 8, 1, 1.0), b = solenoidal(2, 8, 2, 1.0);
    double worst = 0.0;
    int case2 = 0;
    for (int i = 0; i < 20000; ++i) {
        SpectralField u = U(rng) * a, v = U(rng) * a;
        v.add_scaled(U(rng) - 2.0, b);
        const auto rep = verify_fn_lipschitz(u, v, 3.0, 0.5, 1.0);
        if (rep.lemma_case != 2) continue;
        ++case2;
        ASSERT_TRUE(std::isfinite(rep.ratio));
        worst = std::max(worst, rep.ratio);
    }
    RecordProperty("fitted_constant", std::to_string(worst));
    EXPECT_GT(case2, 1000);
    EXPECT_LT(worst, 1e3);
}

TEST(FnLipschitz, FlagsLowBeta) {
    const SpectralField u = solenoidal(2, 8, 3, 2.0), v = solenoidal(2, 8, 4, 3.0);
    EXPECT_TRUE(verify_fn_lipschitz(u, v, 1.5, 0.1, 1.0).low_beta);
    EXPECT_FALSE(verify_fn_lipschitz(u, v, 3.0, 0.1, 1.0).low_beta);
}

TEST(Fmn, Examples) {
    const auto eq = verify_fmn(2.0, 2.0, 1.5, 1.5);
    EXPECT_EQ(eq.lhs, 0.0);
    EXPECT_EQ(eq.rhs, 0.0);
    EXPECT_TRUE(eq.holds);
    const auto ex = verify_fmn(2.0, 2.0, 1.0, 4.0);
    EXPECT_DOUBLE_EQ(ex.lhs, 0.5);
    EXPECT_DOUBLE_EQ(ex.rhs, 1.5);
    EXPECT_TRUE(ex.holds);
    EXPECT_THROW(verify_fmn(0.0, 1.0, 1.0, 1.0), ParameterError);
    EXPECT_THROW(verify_fmn(1.0, 1.0, -1.0, 1.0), ParameterError);
}

TEST(Fmn, RandomTuplesNeverViolate) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> L(-3.0, 3.0);
    for (int i = 0; i < 100000; ++i) {
        const double m = std::pow(10.0, L(rng)), n = std::pow(10.0, L(rng));
        const double p = std::pow(10.0, L(rng)), r = std::pow(10.0, L(rng));
        ASSERT_TRUE(verify_fmn(m, n, p, r).holds) << m << " " << n << " " << p << " " << r;
    }
}

TEST(SimConfig, Validation) {
    SimConfig c = desk_config();
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.grid(), 64);
    EXPECT_EQ(c.steps(), 250u);
    auto bad = [&](auto mutate) {
        SimConfig b = desk_config();
        mutate(b);
        EXPECT_THROW(b.validate(), ParameterError);
    };
    bad([](SimConfig& b) { b.mu = 0.0; });
    bad([](SimConfig& b) { b.alpha = -1.0; });
    bad([](SimConfig& b) { b.beta = 0.9; });
    bad([](SimConfig& b) { b.n_cut = 0.0; });
    bad([](SimConfig& b) { b.dim = 4; });
    bad([](SimConfig& b) { b.grid_points = 40; });
    bad([](SimConfig& b) { b.t_end = 0.0; });
    SimConfig m = desk_config();
    m.dt = 0.3e-3 * 1.1;
    EXPECT_THROW(m.steps(), ParameterError);
}
