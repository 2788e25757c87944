#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bfns/integrate.hpp"

namespace bfns {

/// Squared absorbing radius |f|^2 / (mu lambda_1)^2.
double absorbing_radius(double mu, double forcing_norm_sq, double lambda1 = 1.0);
double absorbing_radius(double mu, const SpectralField& f, double lambda1 = 1.0);

/// sup_{x in X} min_{y in Y} |x - y| in the H (|.|) or V (||.||) norm.
double semidistance(const std::vector<SpectralField>& x, const std::vector<SpectralField>& y, NormKind kind);

/// Deterministic random seed fields with |u|^2 = h_norm_sq each.
std::vector<SpectralField> seed_set(int dim, int modes, std::uint64_t seed, std::size_t count, double h_norm_sq,
                                    int k_max = 0);

struct AttractorCloud {
    std::vector<SpectralField> states;
    std::vector<double> times;         // sample time of each state
    std::vector<std::string> seed_status;  // "ok" or "blowup" per seed
    double radius_sq = 0.0;            // absorbing radius squared
    double max_h_norm_sq = 0.0;        // over the cloud
    double diameter = 0.0;             // max pairwise H distance
    std::size_t failed_seeds = 0;
};

/// Integrates each seed from tau past t_transient and keeps n_snapshots
/// states spaced t_sample apart (both multiples of dt).
AttractorCloud estimate_attractor(const std::vector<SpectralField>& seeds, const SimConfig& cfg, double t_transient,
                                  double t_sample, std::size_t n_snapshots, int jobs = 1);

struct DistanceSeries {
    std::vector<double> t;
    std::vector<double> dist_h;
    std::vector<double> dist_v;
};

/// Evolves B under cfg on [tau, t_end] and samples sup_b min_c distances
/// to the cloud every sample_stride steps (and at t_end).
DistanceSeries distance_decay(const std::vector<SpectralField>& B, const std::vector<SpectralField>& cloud,
                              const SimConfig& cfg, std::size_t sample_stride, int jobs = 1);

/// Least-squares slope of log(y) against t over the positive samples.
double log_slope(const std::vector<double>& t, const std::vector<double>& y);

struct RegularityRow {
    double r = 0.0;
    double v_norm_sq = 0.0;  // sup_{t >= tau + r} ||u||^2
    double au_norm = 0.0;    // sup |Au|
    double ut_norm = 0.0;    // sup |u_t| with u_t the right-hand side
    double lbeta_pow = 0.0;  // sup |u|_{beta+1}^{beta+1}
    std::size_t samples = 0;
};

/// Sup-window probes over the stored snapshots for every r in r_grid.
std::vector<RegularityRow> regularity_probe(const Trajectory& traj, const std::vector<double>& r_grid);

}  // namespace bfns
