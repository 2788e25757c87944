#pragma once

#include <cstddef>
#include <limits>
#include <optional>

#include "bfns/fields.hpp"
#include "bfns/pseudo_spectral.hpp"
#include "bfns/spectral_field.hpp"

namespace bfns {

inline constexpr double kInfiniteCutoff = std::numeric_limits<double>::infinity();

/// Physical and numerical parameters of one run. n_cut = +inf is the
/// unmodified damped system; a finite n_cut selects the globally modified one.
struct SimConfig {
    double mu = 1.0;
    double alpha = 1.0;
    double beta = 3.0;
    double n_cut = kInfiniteCutoff;

    int dim = 2;
    int modes = 16;
    int grid_points = 0;  // 0 selects 4K
    double dt = 1e-3;
    double tau = 0.0;
    double t_end = 1.0;
    int snapshot_stride = 1;

    /// Steady forcing; an empty field means zero forcing.
    SpectralField forcing;

    int grid() const noexcept { return grid_points > 0 ? grid_points : 4 * modes; }
    bool modified() const noexcept { return n_cut != kInfiniteCutoff; }
    /// Number of dt steps covering [tau, t_end]; throws when not aligned.
    std::size_t steps() const;
    double time_at(std::size_t step) const noexcept { return tau + double(step) * dt; }
    /// Forcing as a full field (zero when none was given).
    SpectralField forcing_field() const;
    double forcing_norm_sq() const;

    /// Throws ParameterError for any violated parameter invariant.
    void validate() const;
};

/// True when the two configs describe the same dynamics and discretization
/// (everything except t_end and snapshot_stride).
bool same_dynamics(const SimConfig& a, const SimConfig& b);

/// F_N(r) = min(1, N/r), with F_N(0) = 1 and F_inf = 1.
double f_cut(double n, double r);

/// Cutoff arguments ||u|| and ||u||^(beta-1) from ||u||^2.
struct CutoffArguments {
    double advection;
    double damping;
};
CutoffArguments cutoff_arguments(double v_norm_sq, double beta) noexcept;

/// Right-hand side assembly for one discretization. Owns its transform
/// workspace; one instance per worker.
class RightHandSide {
public:
    struct Options {
        /// Nonlinear and forcing terms are truncated to max_j |k_j| <= mode_limit
        /// when 0 < mode_limit < K (a coarser Galerkin system on the same grid).
        int mode_limit = 0;
    };

    struct Evaluation {
        double v_norm_sq = 0.0;
        double lbeta_pow = 0.0;
        double fn_advection = 1.0;
        double fn_damping = 1.0;
    };

    explicit RightHandSide(const SimConfig& cfg);
    RightHandSide(const SimConfig& cfg, Options options);

    const SimConfig& config() const noexcept { return cfg_; }
    PseudoSpectral& workspace() noexcept { return ws_; }
    const SpectralField& forcing() const noexcept { return forcing_; }

    /// N(u) = -F_N(||u||) P_m B(u,u) - F_N(||u||^(beta-1)) G(u) + f
    Evaluation nonlinear(const SpectralField& u, SpectralField& out);
    /// -mu A u + N(u), projected.
    SpectralField full(const SpectralField& u);

    /// Largest max(||u||, ||u||^(beta-1)) seen by any evaluation so far.
    double max_cutoff_argument() const noexcept { return max_cutoff_argument_; }
    void reset_cutoff_record() noexcept { max_cutoff_argument_ = 0.0; }

private:
    SimConfig cfg_;
    Options options_;
    PseudoSpectral ws_;
    SpectralField forcing_;
    NonlinearTerms terms_;
    double max_cutoff_argument_ = 0.0;
};

/// One-shot convenience form of RightHandSide::full.
SpectralField rhs(const SpectralField& u, const SimConfig& cfg);

/// Outcome of the F_N Lipschitz lemma check on one pair.
struct FnLipschitzReport {
    int lemma_case = 1;   // 1: both at or below N; 2: both above; 3: one above
    double lhs = 0.0;     // |F_N(||u||^(b-1)) - F_N(||v||^(b-1))|
    double rhs = 0.0;     // C_probe ||u - v|| / max(||u||, ||v||); 0 in case 1
    double ratio = 0.0;   // lhs * max(||u||,||v||) / ||u - v||
    bool holds = true;
    bool low_beta = false;  // beta in [1,2): the mean-value step has a negative exponent
};
FnLipschitzReport verify_fn_lipschitz(const SpectralField& u, const SpectralField& v, double beta, double n,
                                      double c_probe);

struct FmnReport {
    double lhs = 0.0;  // |F_M(p) - F_N(r)|
    double rhs = 0.0;  // M/(r p) |p - r| + |M - N| / r
    bool holds = true;
};
FmnReport verify_fmn(double m, double n, double p, double r);

}  // namespace bfns
