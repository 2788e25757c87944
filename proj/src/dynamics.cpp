#include "bfns/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bfns/error.hpp"

namespace bfns {

std::size_t SimConfig::steps() const {
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    const double span = t_end - tau;
    const double n = std::round(span / dt);
    if (!(n >= 1.0) || std::abs(n * dt - span) > 1e-9 * std::max(1.0, std::abs(span)))
        throw ParameterError("horizon [tau, t_end] is not an integer number of dt steps");
    return static_cast<std::size_t>(n);
}

SpectralField SimConfig::forcing_field() const {
    if (forcing.empty()) return SpectralField(dim, modes);
    return forcing;
}

double SimConfig::forcing_norm_sq() const { return forcing.empty() ? 0.0 : h_norm_sq(forcing); }

void SimConfig::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw ParameterError("viscosity mu must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("damping coefficient alpha must be positive");
    if (!(beta >= 1.0) || !std::isfinite(beta)) throw ParameterError("damping exponent beta must be >= 1");
    if (!(n_cut > 0.0)) throw ParameterError("cutoff N must be positive or +inf");
    if (dim != 2 && dim != 3) throw ParameterError("dimension must be 2 or 3");
    if (modes < 1) throw ParameterError("mode cutoff K must be >= 1");
    if (grid() < 4 * modes) throw ParameterError("grid size M must be at least 4K");
    if (!(t_end > tau)) throw ParameterError("t_end must exceed tau");
    if (snapshot_stride < 1) throw ParameterError("snapshot stride must be >= 1");
    (void)steps();
    if (!forcing.empty()) {
        if (forcing.dim() != dim || forcing.modes() != modes) throw ParameterError("forcing shape does not match");
        validate_field(forcing);
    }
}

bool same_dynamics(const SimConfig& a, const SimConfig& b) {
    auto forcing_equal = [](const SimConfig& x, const SimConfig& y) {
        return x.forcing_field().identical(y.forcing_field());
    };
    return a.mu == b.mu && a.alpha == b.alpha && a.beta == b.beta && a.n_cut == b.n_cut && a.dim == b.dim &&
           a.modes == b.modes && a.grid() == b.grid() && a.dt == b.dt && a.tau == b.tau && forcing_equal(a, b);
}

double f_cut(double n, double r) {
    if (!(r >= 0.0)) throw ParameterError("F_N argument must be nonnegative");
    if (!(n > 0.0)) throw ParameterError("cutoff N must be positive or +inf");
    if (n == kInfiniteCutoff || r <= n) return 1.0;
    return n / r;
}

CutoffArguments cutoff_arguments(double v_norm_sq, double beta) noexcept {
    const double v = std::sqrt(v_norm_sq);
    double damping;
    if (beta == 1.0)
        damping = 1.0;
    else if (beta == 3.0)
        damping = v_norm_sq;
    else
        damping = std::pow(v, beta - 1.0);
    return {v, damping};
}

RightHandSide::RightHandSide(const SimConfig& cfg) : RightHandSide(cfg, Options{}) {}

RightHandSide::RightHandSide(const SimConfig& cfg, Options options)
    : cfg_(cfg), options_(options), ws_(cfg.dim, cfg.modes, cfg.grid()), forcing_(cfg.forcing_field()) {
    if (options_.mode_limit > 0 && options_.mode_limit < cfg.modes) truncate_modes(forcing_, options_.mode_limit);
}

RightHandSide::Evaluation RightHandSide::nonlinear(const SpectralField& u, SpectralField& out) {
    if (!ws_.matches(u)) throw ParameterError("state shape does not match the configuration");
    Evaluation ev;
    ev.v_norm_sq = v_norm_sq(u);
    const auto args = cutoff_arguments(ev.v_norm_sq, cfg_.beta);
    max_cutoff_argument_ = std::max({max_cutoff_argument_, args.advection, args.damping});
    ev.fn_advection = f_cut(cfg_.n_cut, args.advection);
    ev.fn_damping = f_cut(cfg_.n_cut, args.damping);

    evaluate_nonlinear(u, cfg_.beta, ws_, terms_);
    ev.lbeta_pow = terms_.lbeta_pow;

    const double damp = cfg_.alpha * ev.fn_damping;
    out = forcing_;
    auto o = out.coefficients();
    const auto a = terms_.advection.coefficients();
    const auto g = terms_.damping.coefficients();
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = (-ev.fn_advection * a[i] - damp * g[i]) + o[i];
    if (options_.mode_limit > 0 && options_.mode_limit < cfg_.modes) truncate_modes(out, options_.mode_limit);
    return ev;
}

SpectralField RightHandSide::full(const SpectralField& u) {
    SpectralField n;
    nonlinear(u, n);
    const auto& t = u.table();
    for (std::size_t i = 0; i < t.count(); ++i)
        for (int c = 0; c < u.dim(); ++c) n.at(i, c) = -cfg_.mu * t.k_sq(i) * u.at(i, c) + n.at(i, c);
    return leray_project(std::move(n));
}

SpectralField rhs(const SpectralField& u, const SimConfig& cfg) {
    cfg.validate();
    validate_field(u);
    RightHandSide r(cfg);
    return r.full(u);
}

FnLipschitzReport verify_fn_lipschitz(const SpectralField& u, const SpectralField& v, double beta, double n,
                                      double c_probe) {
    FnLipschitzReport rep;
    rep.low_beta = beta < 2.0;
    const double vu = std::sqrt(v_norm_sq(u));
    const double vv = std::sqrt(v_norm_sq(v));
    const double a = cutoff_arguments(vu * vu, beta).damping;
    const double b = cutoff_arguments(vv * vv, beta).damping;
    rep.lhs = std::abs(f_cut(n, a) - f_cut(n, b));
    if (a <= n && b <= n) {
        rep.lemma_case = 1;
        rep.rhs = 0.0;
        rep.holds = rep.lhs == 0.0;
        return rep;
    }
    rep.lemma_case = (a > n && b > n) ? 2 : 3;
    const double diff = std::sqrt(v_norm_sq(u - v));
    const double big = std::max(vu, vv);
    rep.rhs = c_probe * diff / big;
    rep.ratio = diff > 0.0 ? rep.lhs * big / diff : 0.0;
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12);
    return rep;
}

FmnReport verify_fmn(double m, double n, double p, double r) {
    if (!(m > 0.0) || !(n > 0.0) || !(p > 0.0) || !(r > 0.0))
        throw ParameterError("F_M/F_N comparison requires positive arguments");
    FmnReport rep;
    rep.lhs = std::abs(f_cut(m, p) - f_cut(n, r));
    rep.rhs = m / (r * p) * std::abs(p - r) + std::abs(m - n) / r;
    // Equality cases are exact in real arithmetic; allow a few ulps of rounding.
    rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12) + 4.0 * 2.220446049250313e-16;
    return rep;
}

}  // namespace bfns
