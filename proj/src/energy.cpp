#include "bfns/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfns/error.hpp"
#include "bfns/fields.hpp"

namespace bfns {

EnergyLedger build_ledger(const Trajectory& traj) {
    const auto& rows = traj.diagnostics;
    if (rows.empty()) throw FormatError("trajectory has no step diagnostics");
    const SimConfig& cfg = traj.config;
    EnergyLedger L;
    L.mu = cfg.mu;
    L.alpha = cfg.alpha;
    L.forcing_norm_sq = cfg.forcing_norm_sq();
    const std::size_t n = rows.size();
    for (auto* v : {&L.t, &L.h_norm_sq, &L.v_norm_sq, &L.lbeta_pow, &L.fn_damping, &L.work, &L.dissipation,
                    &L.absorption, &L.forcing_work, &L.V, &L.J})
        v->resize(n);

    const double t0 = rows.front().t;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[i];
        if (i > 0 && !(r.t >= rows[i - 1].t)) throw FormatError("diagnostic times decrease");
        L.t[i] = r.t;
        L.h_norm_sq[i] = r.h_norm_sq;
        L.v_norm_sq[i] = r.v_norm_sq;
        L.lbeta_pow[i] = r.lbeta_pow;
        L.fn_damping[i] = r.fn_damping;
        L.work[i] = r.work;
        if (i == 0) {
            L.dissipation[i] = L.absorption[i] = L.forcing_work[i] = 0.0;
        } else {
            const double h = r.t - rows[i - 1].t;
            const auto& p = rows[i - 1];
            L.dissipation[i] = L.dissipation[i - 1] + 0.5 * h * L.mu * (p.v_norm_sq + r.v_norm_sq);
            L.absorption[i] = L.absorption[i - 1] +
                              0.5 * h * L.alpha * (p.fn_damping * p.lbeta_pow + r.fn_damping * r.lbeta_pow);
            L.forcing_work[i] = L.forcing_work[i - 1] + 0.5 * h * (p.work + r.work);
        }
        L.V[i] = 0.5 * r.h_norm_sq + L.dissipation[i] + L.absorption[i] - L.forcing_work[i];
        L.J[i] = r.h_norm_sq - L.forcing_norm_sq * (r.t - t0) / (L.mu * L.lambda1);
    }
    return L;
}

std::vector<Diagnostics> diagnostics_from_snapshots(const Trajectory& traj) {
    std::vector<Diagnostics> out;
    if (traj.snapshots.empty()) return out;
    RightHandSide rhs(traj.config);
    SpectralField scratch;
    const SpectralField forcing = traj.config.forcing_field();
    out.reserve(traj.snapshots.size());
    for (const auto& s : traj.snapshots) {
        const auto ev = rhs.nonlinear(s.state, scratch);
        Diagnostics d;
        d.t = s.t;
        d.h_norm_sq = h_norm_sq(s.state);
        d.v_norm_sq = ev.v_norm_sq;
        d.lbeta_pow = ev.lbeta_pow;
        d.fn_advection = ev.fn_advection;
        d.fn_damping = ev.fn_damping;
        d.work = h_inner(forcing, s.state);
        out.push_back(d);
    }
    return out;
}

bool equality_regime(const SimConfig& cfg) { return cfg.modified() || cfg.beta >= 3.0; }

EnergyAudit audit_energy_equality(const EnergyLedger& L, const EnergyLedger* half_dt) {
    EnergyAudit a;
    if (L.size() == 0) return a;
    const double v0 = L.V.front();
    double running_min = v0;
    for (std::size_t i = 0; i < L.size(); ++i) {
        a.max_drift = std::max(a.max_drift, std::abs(L.V[i] - v0));
        a.max_increase = std::max(a.max_increase, L.V[i] - running_min);
        running_min = std::min(running_min, L.V[i]);
    }
    a.scale = 0.5 * L.h_norm_sq.front() + L.dissipation.back() + L.absorption.back() + std::abs(L.forcing_work.back());
    if (half_dt) {
        const auto fine = audit_energy_equality(*half_dt);
        if (fine.max_drift > 0.0 && a.max_drift > 0.0) a.order_estimate = std::log2(a.max_drift / fine.max_drift);
    }
    return a;
}

double decay_bound(double h_norm_sq_s, double elapsed, double mu, double lambda1, double forcing_norm_sq) {
    const double rate = mu * lambda1;
    const double e = std::exp(-rate * elapsed);
    return e * h_norm_sq_s + (1.0 - e) * forcing_norm_sq / (rate * rate);
}

DecayAudit audit_decay(const EnergyLedger& L, double slack, std::size_t max_points) {
    DecayAudit audit;
    const std::size_t n = L.size();
    if (n < 2) return audit;
    std::vector<std::size_t> idx;
    const std::size_t m = std::min(n, std::max<std::size_t>(max_points, 2));
    for (std::size_t j = 0; j < m; ++j) idx.push_back(j * (n - 1) / (m - 1));
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = a + 1; b < idx.size(); ++b) {
            const std::size_t s = idx[a], t = idx[b];
            const double bound = decay_bound(L.h_norm_sq[s], L.t[t] - L.t[s], L.mu, L.lambda1, L.forcing_norm_sq);
            const double value = L.h_norm_sq[t];
            ++audit.pairs_checked;
            if (bound > 0.0) audit.worst_ratio = std::max(audit.worst_ratio, value / bound);
            if (value > bound * (1.0 + slack)) audit.violations.push_back({L.t[s], L.t[t], value, bound});
        }
    }
    return audit;
}

MonotoneJ monotone_j(const EnergyLedger& L) {
    MonotoneJ out;
    out.t = L.t;
    out.J = L.J;
    out.max_increment = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < L.size(); ++i) out.max_increment = std::max(out.max_increment, L.J[i] - L.J[i - 1]);
    if (L.size() < 2) out.max_increment = 0.0;
    return out;
}

}  // namespace bfns
