#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bfns/integrate.hpp"

namespace bfns {

/// gamma(rho) = tau + (T - tau)|rho| for rho in [-1, 1].
double switch_time(double rho, double tau, double t_end);

/// Switching experiment. Branch 1 is the damped system at the base
/// truncation; branch 2 is the same system Galerkin-truncated to
/// max_j |k_j| <= branch2_modes on the same grid and dt. Both start from
/// u_tau truncated to branch2_modes, so they agree at tau.
struct KneserSetup {
    SimConfig base;           // t_end is T; n_cut is ignored
    SpectralField u_tau;
    double t_star = 0.0;      // must lie on the dt grid in (tau, T]
    int branch2_modes = 0;

    std::size_t switch_step_count() const;  // steps on [tau, T]
    std::size_t endpoint_step() const;      // steps on [tau, t_star]
    void validate() const;
};

/// The shared initial state: u_tau truncated to branch2_modes and projected.
SpectralField shared_initial(const KneserSetup& s);

struct SwitchedRun {
    SpectralField endpoint;        // state at t_star
    double max_cutoff_argument;    // recorded by the post-switch dynamics
    std::vector<Diagnostics> diagnostics;  // fn_damping holds the composite F
};

/// Branch-i system up to gamma(rho), then the modified system with cutoff
/// n_cut. Inside the step that contains gamma the two updates are blended
/// linearly in the switch position. n_cut = inf gives Phi^inf(rho).
SwitchedRun run_switched(const KneserSetup& s, double rho, double n_cut, int branch, bool keep_diagnostics = false);

/// Endpoint Phi^N(rho)(t_star); branch 1 for rho < 0, branch 2 for rho > 0
/// and branch 1 at rho = 0 (both branches agree there).
SpectralField phi(const KneserSetup& s, double rho, double n_cut);

/// Unswitched branch trajectory on [tau, t_star].
Trajectory branch_trajectory(const KneserSetup& s, int branch);

struct KneserGrid {
    int intervals = 8;   // rho spacing 2/intervals at level 0; must be even
    int levels = 2;      // each level halves the spacing
    std::vector<double> n_grid;  // cutoffs; +inf allowed
};

struct KneserRow {
    int level = 0;
    double rho = 0.0;
    double n_cut = 0.0;
    int branch = 1;
    double endpoint_norm = 0.0;  // |Phi^N(rho)(t_star)|
    double gap_prev = 0.0;       // |Phi^N(rho_j) - Phi^N(rho_{j-1})|, 0 for the first
};

struct KneserResult {
    std::vector<KneserRow> rows;
    /// max_gap[l][i]: largest consecutive gap at level l for n_grid[i].
    std::vector<std::vector<double>> max_gap;
    /// refinement_ratio[l][i] = max_gap[l][i] / max_gap[l+1][i].
    std::vector<std::vector<double>> refinement_ratio;
    /// sup over the finest rho grid of |Phi^N - Phi^inf|, per n_grid entry.
    std::vector<double> deviation_from_unmodified;
    /// Largest cutoff argument seen along the Phi^inf runs. Any N at or
    /// above it reproduces Phi^inf bitwise.
    double threshold = 0.0;
    bool branches_agree_at_zero = false;
    bool endpoints_match_branches = false;
};

KneserResult kneser_sweep(const KneserSetup& s, const KneserGrid& grid, int jobs = 1);

}  // namespace bfns
