#include "bfns/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>
#include <sstream>

#include "bfns/error.hpp"
#include "bfns/fields.hpp"

namespace bfns {

namespace {

bool bits_equal(const Diagnostics& a, const Diagnostics& b) { return std::memcmp(&a, &b, sizeof(Diagnostics)) == 0; }

bool blown_up(const SpectralField& u) {
    for (const auto& c : u.coefficients()) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
        if (std::abs(c.real()) > kBlowUpMagnitude || std::abs(c.imag()) > kBlowUpMagnitude) return true;
    }
    return false;
}

std::string time_string(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
}

// Integrates steps [first, last) starting from u at step `first`, appending
// snapshots and diagnostics to out. Snapshots are taken at multiples of the
// stride and at `last`; the snapshot at `first` is skipped when skip_first.
void run_steps(Stepper& stepper, SpectralField u, std::size_t first, std::size_t last, bool skip_first,
               Trajectory& out) {
    const SimConfig& cfg = stepper.config();
    const auto stride = static_cast<std::size_t>(cfg.snapshot_stride);
    for (std::size_t n = first; n < last; ++n) {
        const double t = cfg.time_at(n);
        if (n % stride == 0 && !(skip_first && n == first)) out.snapshots.push_back({t, u});
        Stepper::Result res;
        try {
            res = stepper.step(u, t);
        } catch (const BlowUpError& e) {
            out.max_cutoff_argument = std::max(out.max_cutoff_argument, stepper.rhs().max_cutoff_argument());
            auto partial = std::make_shared<Trajectory>(out);
            throw BlowUpError(e.what(), e.time(), std::move(partial));
        }
        out.diagnostics.push_back(res.diagnostics);
        u = std::move(res.next);
    }
    const double t_last = cfg.time_at(last);
    out.diagnostics.push_back(stepper.diagnose(u, t_last));
    if (!(skip_first && last == first)) out.snapshots.push_back({t_last, std::move(u)});
    out.max_cutoff_argument = std::max(out.max_cutoff_argument, stepper.rhs().max_cutoff_argument());
}

SpectralField prepare_initial(const SpectralField& u0, const SimConfig& cfg, bool& projected) {
    if (u0.dim() != cfg.dim || u0.modes() != cfg.modes) throw ParameterError("initial state shape does not match config");
    if (!all_finite(u0)) throw InvalidFieldError("initial state has non-finite coefficients");
    projected = false;
    if (invariant_violation(u0)) {
        projected = true;
        return leray_project(u0);
    }
    return u0;
}

}  // namespace

bool identical(const Trajectory& a, const Trajectory& b) {
    if (a.snapshots.size() != b.snapshots.size() || a.diagnostics.size() != b.diagnostics.size()) return false;
    for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
        if (std::memcmp(&a.snapshots[i].t, &b.snapshots[i].t, sizeof(double)) != 0) return false;
        if (!a.snapshots[i].state.identical(b.snapshots[i].state)) return false;
    }
    for (std::size_t i = 0; i < a.diagnostics.size(); ++i)
        if (!bits_equal(a.diagnostics[i], b.diagnostics[i])) return false;
    return std::memcmp(&a.max_cutoff_argument, &b.max_cutoff_argument, sizeof(double)) == 0;
}

double phi1(double z) noexcept {
    if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return std::expm1(z) / z;
}

double phi2(double z) noexcept {
    if (std::abs(z) < 0.5) {
        // sum_n z^n / (n+2)!
        double term = 0.5, sum = 0.0;
        for (int n = 0; n < 18; ++n) {
            sum += term;
            term *= z / double(n + 3);
        }
        return sum;
    }
    return (std::expm1(z) - z) / (z * z);
}

Stepper::Stepper(const SimConfig& cfg, RightHandSide::Options options) : rhs_(cfg, options) {
    cfg.validate();
    const auto& t = rhs_.workspace().table();
    decay_.resize(t.count());
    phi1_.resize(t.count());
    phi2_.resize(t.count());
    for (std::size_t i = 0; i < t.count(); ++i) {
        const double z = -cfg.mu * t.k_sq(i) * cfg.dt;
        decay_[i] = std::exp(z);
        phi1_[i] = cfg.dt * phi1(z);
        phi2_[i] = cfg.dt * phi2(z);
    }
}

Diagnostics Stepper::make_diagnostics(const SpectralField& u, double t, const RightHandSide::Evaluation& ev) const {
    Diagnostics d;
    d.t = t;
    d.h_norm_sq = h_norm_sq(u);
    d.v_norm_sq = ev.v_norm_sq;
    d.lbeta_pow = ev.lbeta_pow;
    d.fn_advection = ev.fn_advection;
    d.fn_damping = ev.fn_damping;
    d.work = h_inner(rhs_.forcing(), u);
    return d;
}

Stepper::Result Stepper::step(const SpectralField& u, double t) {
    const auto ev = rhs_.nonlinear(u, n0_);
    const auto& tab = u.table();
    const int d = u.dim();

    stage_ = u;
    for (std::size_t i = 0; i < tab.count(); ++i)
        for (int c = 0; c < d; ++c) stage_.at(i, c) = decay_[i] * u.at(i, c) + phi1_[i] * n0_.at(i, c);

    rhs_.nonlinear(stage_, n1_);
    SpectralField next = stage_;
    for (std::size_t i = 0; i < tab.count(); ++i)
        for (int c = 0; c < d; ++c) next.at(i, c) = stage_.at(i, c) + phi2_[i] * (n1_.at(i, c) - n0_.at(i, c));

    if (blown_up(next))
        throw BlowUpError("state blew up at t = " + time_string(t + config().dt), t + config().dt, nullptr);
    return {leray_project(std::move(next)), make_diagnostics(u, t, ev)};
}

Diagnostics Stepper::diagnose(const SpectralField& u, double t) {
    SpectralField scratch;
    const auto ev = rhs_.nonlinear(u, scratch);
    return make_diagnostics(u, t, ev);
}

SpectralField step(const SpectralField& state, double t, double dt, const SimConfig& cfg) {
    SimConfig c = cfg;
    c.dt = dt;
    if (!(dt > 0.0)) throw ParameterError("dt must be positive");
    c.tau = t;
    c.t_end = t + dt;
    validate_field(state);
    Stepper stepper(c);
    return stepper.step(state, t).next;
}

Trajectory simulate(const SpectralField& u0, const SimConfig& cfg) {
    Stepper stepper(cfg);
    return simulate(u0, cfg, stepper);
}

Trajectory simulate(const SpectralField& u0, const SimConfig& cfg, Stepper& stepper) {
    cfg.validate();
    if (!same_dynamics(cfg, stepper.config())) throw ParameterError("stepper was built for a different configuration");
    Trajectory traj;
    traj.config = cfg;
    SpectralField u = prepare_initial(u0, cfg, traj.projected_initial);
    stepper.rhs().reset_cutoff_record();
    const std::size_t n = cfg.steps();
    traj.snapshots.reserve(n / std::size_t(cfg.snapshot_stride) + 2);
    traj.diagnostics.reserve(n + 1);
    run_steps(stepper, std::move(u), 0, n, false, traj);
    return traj;
}

Trajectory restart_concatenate(const Trajectory& first, const SimConfig& cfg) {
    cfg.validate();
    if (first.snapshots.empty()) throw ParameterError("cannot restart from an empty trajectory");
    if (!first.diagnostics.empty() && !same_dynamics(first.config, cfg))
        throw ParameterError("restart configuration differs from the original run");
    const double s = first.snapshots.back().t;
    const double offset = (s - cfg.tau) / cfg.dt;
    const double n0f = std::round(offset);
    if (n0f < 0.0 || cfg.time_at(static_cast<std::size_t>(n0f)) != s)
        throw ParameterError("restart time is not on the dt grid of the configuration");
    const auto n0 = static_cast<std::size_t>(n0f);
    const std::size_t n_total = cfg.steps();
    if (n_total < n0) throw ParameterError("restart configuration ends before the first segment");

    Trajectory out;
    out.config = cfg;
    out.projected_initial = first.projected_initial;
    out.max_cutoff_argument = first.max_cutoff_argument;
    out.snapshots = first.snapshots;
    out.diagnostics = first.diagnostics;
    const auto stride = static_cast<std::size_t>(cfg.snapshot_stride);
    if (n0 % stride != 0 && n0 != n_total) out.snapshots.pop_back();
    if (n0 == n_total) return out;

    Stepper stepper(cfg);
    Trajectory second;
    second.config = cfg;
    run_steps(stepper, first.snapshots.back().state, n0, n_total, true, second);
    for (auto& row : second.diagnostics)
        if (out.diagnostics.empty() || row.t > out.diagnostics.back().t) out.diagnostics.push_back(row);
    for (auto& snap : second.snapshots) out.snapshots.push_back(std::move(snap));
    out.max_cutoff_argument = std::max(out.max_cutoff_argument, second.max_cutoff_argument);
    return out;
}

}  // namespace bfns
