#include <gtest/gtest.h>

#include <cmath>

#include "bfns/error.hpp"
#include "bfns/fields.hpp"
#include "bfns/integrate.hpp"
#include "support.hpp"

using namespace bfns;
using namespace bfns::test;

namespace {

SpectralField single_mode(int modes) {
    SpectralField u(2, modes);
    u.set_mode({1, 0, 0}, 1, Complex(0.5, 0.25));
    return u;
}

SimConfig linear_config(double dt) {
    SimConfig c = desk_config();
    c.modes = 4;
    c.beta = 1.0;
    c.mu = 0.8;
    c.alpha = 0.6;
    c.dt = dt;
    c.t_end = 1.0;
    return c;
}

SpectralField endpoint(const SpectralField& u0, SimConfig c) {
    c.snapshot_stride = 1 << 30;
    return simulate(u0, c).snapshots.back().state;
}

}  // namespace

TEST(Phi, SeriesAndClosedFormAgree) {
    for (double z : {-1e-6, -1e-5, -9e-5, -1.1e-4, -0.3, -0.49, -0.51, -2.0, -40.0}) {
        const double e1 = std::expm1(z) / z, e2 = (std::expm1(z) - z) / (z * z);
        EXPECT_NEAR(phi1(z), e1, 1e-14);
        EXPECT_NEAR(phi2(z), e2, std::abs(z) < 1e-3 ? 1e-9 : 1e-13);
    }
    EXPECT_EQ(phi1(0.0), 1.0);
    EXPECT_EQ(phi2(0.0), 0.5);
}

TEST(Step, LinearSingleModeLocalError) {
    const SpectralField u = single_mode(4);
    double prev = 0.0;
    for (double dt : {0.1, 0.05, 0.025}) {
        const SimConfig c = linear_config(dt);
        const SpectralField one = step(u, 0.0, dt, c);
        const Complex exact = u.at({1, 0, 0}, 1) * std::exp(-(c.mu + c.alpha) * dt);
        const double err = std::abs(one.at({1, 0, 0}, 1) - exact);
        EXPECT_LE(err, 0.2 * std::pow(dt, 3));
        if (prev > 0.0) EXPECT_NEAR(prev / err, 8.0, 1.0);
        prev = err;
    }
}

TEST(Step, ZeroIsEquilibrium) {
    SimConfig c = desk_config();
    EXPECT_EQ(max_abs_coefficient(step(SpectralField(2, 16), 0.0, c.dt, c)), 0.0);
}

TEST(Simulate, LinearSingleModeGlobalOrder) {
    const SpectralField u = single_mode(4);
    double prev = 0.0;
    for (double dt : {0.04, 0.02, 0.01}) {
        const SimConfig c = linear_config(dt);
        const Complex exact = u.at({1, 0, 0}, 1) * std::exp(-(c.mu + c.alpha));
        const double err = std::abs(endpoint(u, c).at({1, 0, 0}, 1) - exact);
        if (prev > 0.0) EXPECT_NEAR(prev / err, 4.0, 0.3);
        prev = err;
    }
}

TEST(Simulate, RichardsonSelfConvergence) {
    SimConfig c = desk_config();
    c.forcing = low_mode_forcing(2, 16, 0.5);
    c.t_end = 0.2;
    const SpectralField u0 = solenoidal(2, 16, 1, 10.0, 4);
    SimConfig c2 = c, c4 = c;
    c.dt = 4e-3;
    c2.dt = 2e-3;
    c4.dt = 1e-3;
    const SpectralField a = endpoint(u0, c), b = endpoint(u0, c2), r = endpoint(u0, c4);
    const double ratio = std::sqrt(h_norm_sq(a - b) / h_norm_sq(b - r));
    EXPECT_GE(ratio, 3.3);
    EXPECT_LE(ratio, 4.8);
    EXPECT_GE(std::log2(ratio), 1.8);
    EXPECT_LE(std::log2(ratio), 2.2);
}

TEST(Simulate, Deterministic) {
    SimConfig c = desk_config();
    c.n_cut = 4.0;
    c.snapshot_stride = 7;
    const SpectralField u0 = solenoidal(2, 16, 8, 6.0);
    EXPECT_TRUE(identical(simulate(u0, c), simulate(u0, c)));
}

TEST(Simulate, SnapshotsAndDiagnosticsLayout) {
    SimConfig c = desk_config();
    c.snapshot_stride = 60;
    const Trajectory tr = simulate(solenoidal(2, 16, 8, 1.0), c);
    ASSERT_EQ(tr.diagnostics.size(), c.steps() + 1);
    // 0, 60, ..., 240 and the final step 250
    ASSERT_EQ(tr.snapshots.size(), 6u);
    EXPECT_EQ(tr.snapshots.back().t, c.time_at(c.steps()));
    EXPECT_EQ(tr.snapshots[2].t, c.time_at(120));
}

TEST(Simulate, UnforcedNormNonincreasing) {
    for (double n : {kInfiniteCutoff, 2.0}) {
        SimConfig c = desk_config();
        c.n_cut = n;
        const Trajectory tr = simulate(solenoidal(2, 16, 3, 10.0), c);
        for (std::size_t i = 1; i < tr.diagnostics.size(); ++i)
            ASSERT_LT(tr.diagnostics[i].h_norm_sq, tr.diagnostics[i - 1].h_norm_sq);
    }
}

TEST(Simulate, InactiveCutoffBitwise) {
    SimConfig c = desk_config();
    c.forcing = low_mode_forcing(2, 16, 0.5);
    const SpectralField u0 = solenoidal(2, 16, 12, 4.0);
    const Trajectory ref = simulate(u0, c);
    SimConfig m = c;
    m.n_cut = ref.max_cutoff_argument;
    EXPECT_TRUE(identical(simulate(u0, m), ref));
}

TEST(Simulate, TwinRunGrowthIsBounded) {
    SimConfig c = desk_config();
    c.mu = 1.0;
    c.alpha = 0.5;
    c.t_end = 1.0;
    c.dt = 2e-3;
    c.forcing = low_mode_forcing(2, 16, 1.0);
    const SpectralField u0 = solenoidal(2, 16, 5, 4.0);
    SpectralField v0 = u0;
    v0.add_scaled(1e-8, solenoidal(2, 16, 6, 1.0));
    const Trajectory a = simulate(u0, c), b = simulate(v0, c);
    double fitted = -1e300;
    for (std::size_t i = 1; i < a.snapshots.size(); ++i) {
        const double w = std::sqrt(h_norm_sq(a.snapshots[i].state - b.snapshots[i].state));
        fitted = std::max(fitted, std::log(w / 1e-8) / a.snapshots[i].t);
    }
    RecordProperty("fitted_rate", std::to_string(fitted));
    EXPECT_LT(fitted, 10.0);
}

TEST(Simulate, ProjectsInvalidInitialState) {
    SimConfig c = desk_config();
    c.t_end = 0.01;
    const Trajectory tr = simulate(raw_field(2, 16, 1, 1e-3), c);
    EXPECT_TRUE(tr.projected_initial);
    EXPECT_FALSE(invariant_violation(tr.snapshots.front().state).has_value());
    EXPECT_FALSE(simulate(solenoidal(2, 16, 1), c).projected_initial);
}

TEST(Simulate, BlowUpCarriesPartialTrajectory) {
    SimConfig c = desk_config();
    c.dt = 0.5;
    c.t_end = 50.0;
    c.beta = 1.0;
    c.mu = 0.01;
    try {
        simulate(solenoidal(2, 16, 2, 1e4), c);
        FAIL() << "expected blow-up";
    } catch (const BlowUpError& e) {
        ASSERT_TRUE(e.partial());
        EXPECT_FALSE(e.partial()->snapshots.empty());
        EXPECT_GT(e.time(), 0.0);
        EXPECT_LT(e.partial()->snapshots.back().t, e.time());
    }
}

TEST(Restart, TwoSegmentsEqualOneRun) {
    SimConfig c = desk_config();
    c.n_cut = 5.0;
    c.forcing = low_mode_forcing(2, 16, 0.5);
    const SpectralField u0 = solenoidal(2, 16, 2, 8.0);
    const Trajectory whole = simulate(u0, c);
    SimConfig half = c;
    half.t_end = 0.125;
    EXPECT_TRUE(identical(restart_concatenate(simulate(u0, half), c), whole));
}

TEST(Restart, AtTauIsIdentity) {
    SimConfig c = desk_config();
    const SpectralField u0 = solenoidal(2, 16, 2, 2.0);
    Trajectory start;
    start.config = c;
    start.snapshots.push_back({c.tau, u0});
    Stepper st(c);
    start.diagnostics.push_back(st.diagnose(u0, c.tau));
    EXPECT_TRUE(identical(restart_concatenate(start, c), simulate(u0, c)));
}

TEST(Restart, ThreeSegmentsWithStride) {
    SimConfig c = desk_config();
    c.snapshot_stride = 7;
    const SpectralField u0 = solenoidal(2, 16, 4, 3.0);
    const Trajectory whole = simulate(u0, c);
    SimConfig a = c, b = c;
    a.t_end = 0.05;   // step 50, not a stride multiple
    b.t_end = 0.203;  // step 203 = 29 * 7
    const Trajectory glued = restart_concatenate(restart_concatenate(simulate(u0, a), b), c);
    EXPECT_TRUE(identical(glued, whole));
}

TEST(Restart, MisalignedGridRejected) {
    SimConfig c = desk_config();
    SimConfig a = c;
    a.t_end = 0.1;
    const Trajectory first = simulate(solenoidal(2, 16, 4, 3.0), a);
    SimConfig other = c;
    other.dt = 3e-3;
    other.t_end = 0.3;
    EXPECT_THROW(restart_concatenate(first, other), ParameterError);
}
