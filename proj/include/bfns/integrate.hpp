#pragma once

#include <cstddef>
#include <vector>

#include "bfns/dynamics.hpp"
#include "bfns/spectral_field.hpp"

namespace bfns {

/// Per-step diagnostics of the state at time t.
struct Diagnostics {
    double t = 0.0;
    double h_norm_sq = 0.0;     // |u|^2
    double v_norm_sq = 0.0;     // ||u||^2
    double lbeta_pow = 0.0;     // |u|_{beta+1}^{beta+1}
    double fn_advection = 1.0;  // F_N(||u||)
    double fn_damping = 1.0;    // F_N(||u||^(beta-1)), or the composite value in switched runs
    double work = 0.0;          // (f, u)

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

struct Snapshot {
    double t = 0.0;
    SpectralField state;
};

struct Trajectory {
    SimConfig config;
    std::vector<Snapshot> snapshots;
    /// One row per time step, t = tau, tau + dt, ..., t_end.
    std::vector<Diagnostics> diagnostics;
    /// Largest max(||u||, ||u||^(beta-1)) over all right-hand-side evaluations.
    double max_cutoff_argument = 0.0;
    /// The supplied initial state was projected before integration.
    bool projected_initial = false;

    double start_time() const { return snapshots.empty() ? config.tau : snapshots.front().t; }
    double end_time() const { return snapshots.empty() ? config.tau : snapshots.back().t; }
};

/// Bitwise comparison of times, states and diagnostics.
bool identical(const Trajectory& a, const Trajectory& b);

/// Magnitude above which a coefficient is treated as blow-up.
inline constexpr double kBlowUpMagnitude = 1e15;

/// phi_1(z) = (e^z - 1)/z, by series for |z| < 1e-4.
double phi1(double z) noexcept;
/// phi_2(z) = (e^z - 1 - z)/z^2, by series for |z| < 0.5.
double phi2(double z) noexcept;

/// Exponential time differencing RK2 (Cox-Matthews) for
/// du/dt = -mu A u + N(u). The linear part is integrated exactly.
class Stepper {
public:
    explicit Stepper(const SimConfig& cfg, RightHandSide::Options options = {});

    struct Result {
        SpectralField next;
        Diagnostics diagnostics;  // of the input state
    };

    /// Advances u from t to t + dt. Throws BlowUpError (without a partial
    /// trajectory) when the new state is non-finite or too large.
    Result step(const SpectralField& u, double t);

    /// Diagnostics of u at t (one extra nonlinear evaluation).
    Diagnostics diagnose(const SpectralField& u, double t);

    RightHandSide& rhs() noexcept { return rhs_; }
    const SimConfig& config() const noexcept { return rhs_.config(); }

private:
    Diagnostics make_diagnostics(const SpectralField& u, double t, const RightHandSide::Evaluation& ev) const;

    RightHandSide rhs_;
    std::vector<double> decay_;  // e^{-mu |k|^2 dt}
    std::vector<double> phi1_;   // dt phi_1
    std::vector<double> phi2_;   // dt phi_2
    SpectralField n0_, n1_, stage_;
};

/// One ETD-RK2 step with a freshly built Stepper.
SpectralField step(const SpectralField& state, double t, double dt, const SimConfig& cfg);

/// Integrates on [tau, t_end]. Non-solenoidal or non-mean-free input is
/// projected first and flagged in the result. Throws BlowUpError carrying
/// the partial trajectory.
Trajectory simulate(const SpectralField& u0, const SimConfig& cfg);
Trajectory simulate(const SpectralField& u0, const SimConfig& cfg, Stepper& stepper);

/// Resumes `first` from its final state and integrates to cfg.t_end on the
/// same dt grid, returning the glued trajectory on [tau, cfg.t_end].
Trajectory restart_concatenate(const Trajectory& first, const SimConfig& cfg);

}  // namespace bfns
