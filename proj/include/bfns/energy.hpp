#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bfns/integrate.hpp"

namespace bfns {

/// Energy bookkeeping along a trajectory. Cumulative integrals use the
/// trapezoid rule on the step grid.
///
///   V(t) = 1/2 |u(t)|^2 + mu int ||u||^2 + alpha int F |u|_{b+1}^{b+1} - int (f,u)
///   J(t) = |u(t)|^2 - (1/(mu lambda_1)) int |f|^2
///
/// With F = F_N(||u||^(beta-1)) this is V^N; with N = inf it is V.
struct EnergyLedger {
    double mu = 1.0;
    double alpha = 1.0;
    double lambda1 = 1.0;
    double forcing_norm_sq = 0.0;

    std::vector<double> t;
    std::vector<double> h_norm_sq;
    std::vector<double> v_norm_sq;
    std::vector<double> lbeta_pow;
    std::vector<double> fn_damping;
    std::vector<double> work;

    std::vector<double> dissipation;  // int mu ||u||^2
    std::vector<double> absorption;   // int alpha F |u|^{b+1}
    std::vector<double> forcing_work; // int (f, u)
    std::vector<double> V;
    std::vector<double> J;

    std::size_t size() const noexcept { return t.size(); }
};

/// Builds the ledger from step-resolution diagnostics of the trajectory.
/// Throws FormatError when diagnostics are missing.
EnergyLedger build_ledger(const Trajectory& traj);

/// Diagnostics recomputed from the stored snapshots (stride 1 gives step
/// resolution). Used for persisted trajectories, which carry no diagnostics.
std::vector<Diagnostics> diagnostics_from_snapshots(const Trajectory& traj);

/// Energy equality holds for the modified system and for beta >= 3.
bool equality_regime(const SimConfig& cfg);

struct EnergyAudit {
    double max_drift = 0.0;      // max_t |V(t) - V(tau)|
    double max_increase = 0.0;   // max_{s<=t} V(t) - V(s)
    double scale = 0.0;          // magnitude used for relative drift
    std::optional<double> order_estimate;  // log2(drift(dt) / drift(dt/2))

    double relative_drift() const noexcept { return scale > 0.0 ? max_drift / scale : max_drift; }
};

/// Drift of V along the ledger; with a dt/2 ledger also the drift order.
EnergyAudit audit_energy_equality(const EnergyLedger& ledger, const EnergyLedger* half_dt = nullptr);

struct DecayViolation {
    double s;
    double t;
    double value;  // |u(t)|^2
    double bound;  // e^{-mu l1 (t-s)}|u(s)|^2 + (1 - e^{...}) |f|^2/(mu l1)^2
};

struct DecayAudit {
    std::size_t pairs_checked = 0;
    double worst_ratio = 0.0;  // max value / bound over checked pairs with bound > 0
    std::vector<DecayViolation> violations;
};

/// Bound of the decay estimate for |u(t)|^2 from |u(s)|^2.
double decay_bound(double h_norm_sq_s, double elapsed, double mu, double lambda1, double forcing_norm_sq);

/// Checks the decay estimate on pairs s < t drawn from at most max_points
/// evenly spaced ledger rows, with multiplicative slack.
DecayAudit audit_decay(const EnergyLedger& ledger, double slack = 0.05, std::size_t max_points = 200);

struct MonotoneJ {
    std::vector<double> t;
    std::vector<double> J;
    double max_increment = 0.0;  // largest J(t_{n+1}) - J(t_n), possibly negative
};
MonotoneJ monotone_j(const EnergyLedger& ledger);

}  // namespace bfns
