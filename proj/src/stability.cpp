#include "bfns/stability.hpp"

#include <algorithm>
#include <cmath>

#include "bfns/error.hpp"
#include "bfns/fields.hpp"
#include "bfns/parallel.hpp"
#include "bfns/random_fields.hpp"

namespace bfns {

namespace {

void require_shared_discretization(const SimConfig& a, const SimConfig& b) {
    if (a.dim != b.dim || a.modes != b.modes || a.grid() != b.grid() || a.dt != b.dt || a.tau != b.tau ||
        a.t_end != b.t_end)
        throw ParameterError("paired runs must share d, K, M, dt, tau and t_end");
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

// States at every step of one run, from the stride-1 trajectory.
Trajectory step_resolved(const SpectralField& u0, SimConfig cfg) {
    cfg.snapshot_stride = 1;
    return simulate(u0, cfg);
}

std::vector<double> v_norm_series(const Trajectory& tr) {
    std::vector<double> out;
    out.reserve(tr.diagnostics.size());
    for (const auto& d : tr.diagnostics) out.push_back(d.v_norm_sq);
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

PairRun pair_run(const SimConfig& cfg_u, const SimConfig& cfg_v, const SpectralField& u_tau,
                 const SpectralField& v_tau) {
    require_shared_discretization(cfg_u, cfg_v);
    cfg_u.validate();
    cfg_v.validate();
    validate_field(u_tau);
    validate_field(v_tau);
    Stepper su(cfg_u), sv(cfg_v);
    const std::size_t n = cfg_u.steps();
    PairRun out;
    out.t.reserve(n + 1);
    out.w_sq.reserve(n + 1);
    std::vector<double> u_v;
    u_v.reserve(n + 1);
    SpectralField u = u_tau, v = v_tau;
    for (std::size_t i = 0;; ++i) {
        const double t = cfg_u.time_at(i);
        out.t.push_back(t);
        out.w_sq.push_back(h_norm_sq(v - u));
        u_v.push_back(v_norm_sq(u));
        if (i == n) break;
        u = su.step(u, t).next;
        v = sv.step(v, t).next;
    }
    out.u_dissipation_integral = trapezoid(out.t, u_v);
    out.forcing_gap_integral = h_norm_sq(cfg_v.forcing_field() - cfg_u.forcing_field()) * (cfg_u.t_end - cfg_u.tau);
    return out;
}

double fit_growth_rate(const std::vector<double>& t, const std::vector<double>& w_sq) {
    double sup = 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        sup = std::max(sup, w_sq[i]);
        if (!(sup > 0.0)) continue;
        const double x = t[i] - t.front();
        const double y = std::log(sup);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return 0.0;
    const double den = double(m) * sxx - sx * sx;
    return den > 0.0 ? (double(m) * sxy - sx * sy) / den : 0.0;
}

StabilityReport continuity_sweep(const SimConfig& base, const SpectralField& u_tau, const StabilityGrids& grids,
                                 int jobs) {
    base.validate();
    validate_field(u_tau);
    std::vector<StabilityRow> rows;
    for (double e : grids.eps)
        if (e != 0.0) rows.push_back({.kind = "initial", .eps = std::abs(e)});
    for (double d : grids.delta)
        if (d != 0.0) rows.push_back({.kind = "cutoff", .delta = std::abs(d)});
    for (double h : grids.eta)
        if (h != 0.0) rows.push_back({.kind = "forcing", .eta = std::abs(h)});
    if (rows.empty()) throw ParameterError("stability sweep has no nonzero perturbation");
    if (!base.modified() && std::any_of(rows.begin(), rows.end(), [](auto& r) { return r.kind == "cutoff"; }))
        throw ParameterError("cutoff perturbations need a finite base N");

    const SpectralField initial_dir = random_solenoidal(base.dim, base.modes, grids.seed, 1.0, 0, 1.0);
    const SpectralField forcing_dir = random_solenoidal(base.dim, base.modes, grids.seed + 1, 1.0, 0, 1.0);

    const Trajectory ref = step_resolved(u_tau, base);
    const auto u_v = v_norm_series(ref);
    std::vector<double> times;
    for (const auto& s : ref.snapshots) times.push_back(s.t);
    const double u_dissipation = trapezoid(times, u_v);

    parallel_for(rows.size(), resolve_jobs(jobs), [&](std::size_t i) {
        StabilityRow& row = rows[i];
        SimConfig cfg_v = base;
        SpectralField v_tau = u_tau;
        if (row.kind == "initial") v_tau.add_scaled(row.eps, initial_dir);
        if (row.kind == "cutoff") cfg_v.n_cut = base.n_cut + row.delta;
        if (row.kind == "forcing") {
            SpectralField f = base.forcing_field();
            f.add_scaled(row.eta, forcing_dir);
            cfg_v.forcing = leray_project(std::move(f));
        }
        v_tau = leray_project(std::move(v_tau));
        try {
            const Trajectory tv = step_resolved(v_tau, cfg_v);
            std::vector<double> w_sq(times.size());
            for (std::size_t n = 0; n < times.size(); ++n)
                w_sq[n] = h_norm_sq(tv.snapshots[n].state - ref.snapshots[n].state);
            row.sup_w2 = *std::max_element(w_sq.begin(), w_sq.end());
            const double f_gap = h_norm_sq(cfg_v.forcing_field() - base.forcing_field()) * (base.t_end - base.tau);
            row.denom = h_norm_sq(v_tau - u_tau) + row.delta * row.delta * u_dissipation + f_gap;
            row.ratio = row.denom > 0.0 ? row.sup_w2 / row.denom : 0.0;
            row.gamma_hat = fit_growth_rate(times, w_sq);
        } catch (const BlowUpError& e) {
            row.status = "blowup";
        }
    });

    StabilityReport rep;
    std::vector<double> ratios;
    for (const auto& r : rows) {
        if (r.status != "ok") {
            ++rep.failed_rows;
            continue;
        }
        ratios.push_back(r.ratio);
        rep.max_ratio = std::max(rep.max_ratio, r.ratio);
        rep.gamma_hat = std::max(rep.gamma_hat, r.gamma_hat);
    }
    rep.median_ratio = median(ratios);
    std::map<std::string, std::vector<double>> by_kind;
    for (const auto& r : rows)
        if (r.status == "ok") by_kind[r.kind].push_back(r.ratio);
    for (auto& [kind, v] : by_kind) rep.median_by_kind[kind] = median(v);
    for (const auto& r : rows) {
        if (r.status != "ok") continue;
        const double m = rep.median_by_kind[r.kind];
        if (m > 0.0 && r.ratio > 0.0) rep.max_spread = std::max({rep.max_spread, r.ratio / m, m / r.ratio});
    }
    rep.rows = std::move(rows);
    return rep;
}

}  // namespace bfns
