#include <gtest/gtest.h>

#include <cmath>

#include "bfns/energy.hpp"
#include "bfns/error.hpp"
#include "bfns/fields.hpp"
#include "support.hpp"

using namespace bfns;
using namespace bfns::test;

namespace {

EnergyLedger ledger_for(const SpectralField& u0, const SimConfig& c) { return build_ledger(simulate(u0, c)); }

double drift(const SpectralField& u0, SimConfig c, double dt) {
    c.dt = dt;
    return audit_energy_equality(ledger_for(u0, c)).max_drift;
}

}  // namespace

TEST(Ledger, ZeroTrajectory) {
    SimConfig c = desk_config();
    c.t_end = 0.05;
    const EnergyLedger L = ledger_for(SpectralField(2, 16), c);
    ASSERT_EQ(L.size(), 51u);
    for (std::size_t i = 0; i < L.size(); ++i) {
        EXPECT_EQ(L.V[i], 0.0);
        EXPECT_EQ(L.J[i], 0.0);
    }
    EXPECT_EQ(audit_energy_equality(L).max_drift, 0.0);
}

TEST(Ledger, TrapezoidOnHandBuiltRows) {
    Trajectory tr;
    tr.config = desk_config();
    tr.config.mu = 2.0;
    tr.config.alpha = 0.5;
    Diagnostics a, b;
    a.t = 0.0;
    a.h_norm_sq = 4.0;
    a.v_norm_sq = 3.0;
    a.lbeta_pow = 2.0;
    a.fn_damping = 1.0;
    a.work = 1.0;
    b.t = 0.1;
    b.h_norm_sq = 3.0;
    b.v_norm_sq = 5.0;
    b.lbeta_pow = 4.0;
    b.fn_damping = 0.5;
    b.work = 3.0;
    tr.diagnostics = {a, b};
    const EnergyLedger L = build_ledger(tr);
    EXPECT_DOUBLE_EQ(L.dissipation[1], 0.05 * 2.0 * 8.0);
    EXPECT_DOUBLE_EQ(L.absorption[1], 0.05 * 0.5 * (2.0 + 2.0));
    EXPECT_DOUBLE_EQ(L.forcing_work[1], 0.05 * 4.0);
    EXPECT_DOUBLE_EQ(L.V[0], 2.0);
    EXPECT_DOUBLE_EQ(L.V[1], 1.5 + 0.8 + 0.1 - 0.2);
}

TEST(Ledger, MissingDiagnosticsIsFormatError) {
    Trajectory tr;
    tr.config = desk_config();
    EXPECT_THROW(build_ledger(tr), FormatError);
}

TEST(Ledger, DecreasingTimesRejected) {
    Trajectory tr;
    tr.config = desk_config();
    Diagnostics a, b;
    a.t = 0.2;
    b.t = 0.1;
    tr.diagnostics = {a, b};
    EXPECT_THROW(build_ledger(tr), FormatError);
}

TEST(Ledger, SnapshotRecomputationMatchesStepDiagnostics) {
    SimConfig c = desk_config();
    c.t_end = 0.05;
    c.n_cut = 3.0;
    c.forcing = low_mode_forcing(2, 16, 0.5);
    Trajectory tr = simulate(solenoidal(2, 16, 9, 6.0), c);
    const auto re = diagnostics_from_snapshots(tr);
    ASSERT_EQ(re.size(), tr.diagnostics.size());
    for (std::size_t i = 0; i < re.size(); ++i) {
        const auto& d = tr.diagnostics[i];
        EXPECT_EQ(re[i].t, d.t);
        EXPECT_NEAR(re[i].h_norm_sq, d.h_norm_sq, 1e-12 * d.h_norm_sq);
        EXPECT_NEAR(re[i].v_norm_sq, d.v_norm_sq, 1e-12 * d.v_norm_sq);
        EXPECT_NEAR(re[i].lbeta_pow, d.lbeta_pow, 1e-12 * d.lbeta_pow);
        EXPECT_NEAR(re[i].fn_damping, d.fn_damping, 1e-12);
        EXPECT_NEAR(re[i].work, d.work, 1e-12 * std::abs(d.work) + 1e-14);
    }
}

TEST(Equality, DriftIsSecondOrder) {
    for (double n : {kInfiniteCutoff, 5.0}) {
        SimConfig c = desk_config();
        c.n_cut = n;
        c.forcing = low_mode_forcing(2, 16, 0.5);
        const SpectralField u0 = solenoidal(2, 16, 3, 8.0, 6);
        const double r = drift(u0, c, 2e-3) / drift(u0, c, 1e-3);
        EXPECT_NEAR(r, 4.0, 0.4) << n;
    }
}

TEST(Equality, RelativeDriftSmallAtDeskResolution) {
    SimConfig c = desk_config();
    c.forcing = low_mode_forcing(2, 16, 0.5);
    const auto a = audit_energy_equality(ledger_for(solenoidal(2, 16, 3, 8.0, 6), c));
    RecordProperty("relative_drift", std::to_string(a.relative_drift()));
    EXPECT_LT(a.relative_drift(), 1e-4);
}

TEST(Equality, OrderEstimateFromHalfStep) {
    SimConfig c = desk_config();
    c.dt = 2e-3;
    const SpectralField u0 = solenoidal(2, 16, 3, 8.0, 6);
    const EnergyLedger coarse = ledger_for(u0, c);
    c.dt = 1e-3;
    const EnergyLedger fine = ledger_for(u0, c);
    const auto a = audit_energy_equality(coarse, &fine);
    ASSERT_TRUE(a.order_estimate.has_value());
    EXPECT_NEAR(*a.order_estimate, 2.0, 0.2);
}

TEST(Equality, Regimes) {
    SimConfig c = desk_config();
    EXPECT_TRUE(equality_regime(c));
    c.beta = 2.0;
    EXPECT_FALSE(equality_regime(c));
    c.n_cut = 10.0;
    EXPECT_TRUE(equality_regime(c));
}

TEST(Inequality, QuadraticDampingIncreaseIsDiscretizationSized) {
    SimConfig c = desk_config();
    c.beta = 2.0;
    c.forcing = low_mode_forcing(2, 16, 0.5);
    const SpectralField u0 = solenoidal(2, 16, 3, 8.0, 6);
    c.dt = 2e-3;
    const auto coarse = audit_energy_equality(ledger_for(u0, c));
    c.dt = 1e-3;
    const auto fine = audit_energy_equality(ledger_for(u0, c));
    RecordProperty("max_increase", std::to_string(fine.max_increase));
    EXPECT_LE(fine.max_increase, 1e-4 * fine.scale);
    // C dt^2: halving dt cuts the increase by about four
    if (fine.max_increase > 0.0) EXPECT_GT(coarse.max_increase / fine.max_increase, 3.0);
}

TEST(Decay, BoundFormula) {
    EXPECT_DOUBLE_EQ(decay_bound(2.0, 1.0, 1.0, 1.0, 0.0), 2.0 * std::exp(-1.0));
    EXPECT_DOUBLE_EQ(decay_bound(0.0, 1e9, 2.0, 1.0, 8.0), 2.0);
    EXPECT_DOUBLE_EQ(decay_bound(5.0, 0.0, 1.0, 1.0, 3.0), 5.0);
}

TEST(Decay, UnforcedUnitTimeExample) {
    SimConfig c = desk_config();
    c.t_end = 1.0;
    c.dt = 2e-3;
    const SpectralField u0 = solenoidal(2, 16, 1, 2.0);
    const EnergyLedger L = ledger_for(u0, c);
    EXPECT_LE(L.h_norm_sq.back(), std::exp(-1.0) * L.h_norm_sq.front());
}

TEST(Decay, ThousandPairsNoViolations) {
    SimConfig c = desk_config();
    c.t_end = 2.0;
    c.dt = 2e-3;
    c.n_cut = 4.0;
    c.forcing = low_mode_forcing(2, 16, 2.0);
    const EnergyLedger L = ledger_for(solenoidal(2, 16, 14, 20.0), c);
    const DecayAudit a = audit_decay(L, 0.0, 46);
    EXPECT_GE(a.pairs_checked, 1000u);
    EXPECT_TRUE(a.violations.empty());
    EXPECT_LE(a.worst_ratio, 1.0);
}

TEST(MonotoneJ, Examples) {
    EnergyLedger L;
    L.t = {0.0, 1.0, 2.0};
    L.J = {3.0, 2.0, 2.5};
    EXPECT_DOUBLE_EQ(monotone_j(L).max_increment, 0.5);
    L.t = {0.0};
    L.J = {1.0};
    EXPECT_EQ(monotone_j(L).max_increment, 0.0);
}

TEST(MonotoneJ, NonincreasingAlongForcedRun) {
    for (double n : {kInfiniteCutoff, 2.0}) {
        SimConfig c = desk_config();
        c.t_end = 1.0;
        c.dt = 2e-3;
        c.n_cut = n;
        c.forcing = low_mode_forcing(2, 16, 3.0);
        const auto m = monotone_j(ledger_for(solenoidal(2, 16, 4, 1.0), c));
        EXPECT_LT(m.max_increment, 1e-10) << n;
    }
}
