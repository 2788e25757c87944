#include "bfns/kneser.hpp"

#include <algorithm>
#include <cmath>

#include "bfns/error.hpp"
#include "bfns/fields.hpp"
#include "bfns/parallel.hpp"

namespace bfns {

namespace {

std::size_t steps_to(const SimConfig& cfg, double t) {
    SimConfig c = cfg;
    c.t_end = t;
    return c.steps();
}

SimConfig branch_config(const KneserSetup& s) {
    SimConfig c = s.base;
    c.n_cut = kInfiniteCutoff;
    return c;
}

RightHandSide::Options branch_options(const KneserSetup& s, int branch) {
    RightHandSide::Options o;
    if (branch == 2) o.mode_limit = s.branch2_modes;
    return o;
}

}  // namespace

double switch_time(double rho, double tau, double t_end) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw ParameterError("rho must lie in [-1, 1]");
    return tau + (t_end - tau) * std::abs(rho);
}

std::size_t KneserSetup::switch_step_count() const { return base.steps(); }

std::size_t KneserSetup::endpoint_step() const { return steps_to(base, t_star); }

void KneserSetup::validate() const {
    SimConfig c = base;
    c.n_cut = kInfiniteCutoff;
    c.validate();
    if (!(t_star > base.tau && t_star <= base.t_end)) throw ParameterError("t_star must lie in (tau, T]");
    endpoint_step();
    if (branch2_modes < 1 || branch2_modes >= base.modes)
        throw ParameterError("branch2_modes must be in [1, K)");
    if (u_tau.dim() != base.dim || u_tau.modes() != base.modes)
        throw ParameterError("u_tau does not match the discretization");
}

SpectralField shared_initial(const KneserSetup& s) {
    SpectralField u = s.u_tau;
    truncate_modes(u, s.branch2_modes);
    return leray_project(std::move(u));
}

SwitchedRun run_switched(const KneserSetup& s, double rho, double n_cut, int branch, bool keep_diagnostics) {
    s.validate();
    if (branch != 1 && branch != 2) throw ParameterError("branch must be 1 or 2");
    if (!(n_cut > 0.0)) throw ParameterError("cutoff N must be positive");
    switch_time(rho, s.base.tau, s.base.t_end);

    const SimConfig bcfg = branch_config(s);
    SimConfig mcfg = bcfg;
    mcfg.n_cut = n_cut;
    Stepper branch_stepper(bcfg, branch_options(s, branch));
    Stepper modified(mcfg);

    // switch position in units of steps
    const double sw = std::abs(rho) * double(s.switch_step_count());
    const std::size_t n = s.endpoint_step();

    SwitchedRun out;
    SpectralField u = shared_initial(s);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = bcfg.time_at(j);
        const double theta = std::clamp(sw - double(j), 0.0, 1.0);
        Diagnostics d;
        if (theta == 1.0) {
            auto r = branch_stepper.step(u, t);
            u = std::move(r.next);
            d = r.diagnostics;
            d.fn_advection = d.fn_damping = 1.0;
        } else if (theta == 0.0) {
            auto r = modified.step(u, t);
            u = std::move(r.next);
            d = r.diagnostics;
        } else {
            auto a = branch_stepper.step(u, t);
            auto b = modified.step(u, t);
            if (a.next.identical(b.next)) {
                u = std::move(a.next);
            } else {
                SpectralField mix = a.next;
                mix.add_scaled(1.0 - theta, b.next - a.next);
                u = leray_project(std::move(mix));
            }
            d = b.diagnostics;
            d.fn_advection = theta + (1.0 - theta) * d.fn_advection;
            d.fn_damping = theta + (1.0 - theta) * d.fn_damping;
        }
        if (keep_diagnostics) out.diagnostics.push_back(d);
    }
    if (keep_diagnostics) {
        const double t = bcfg.time_at(n);
        Diagnostics d;
        if (sw >= double(n)) {
            d = branch_stepper.diagnose(u, t);
            d.fn_advection = d.fn_damping = 1.0;
        } else {
            d = modified.diagnose(u, t);
        }
        out.diagnostics.push_back(d);
    }
    out.endpoint = std::move(u);
    out.max_cutoff_argument = modified.rhs().max_cutoff_argument();
    return out;
}

SpectralField phi(const KneserSetup& s, double rho, double n_cut) {
    return run_switched(s, rho, n_cut, rho > 0.0 ? 2 : 1).endpoint;
}

Trajectory branch_trajectory(const KneserSetup& s, int branch) {
    s.validate();
    if (branch != 1 && branch != 2) throw ParameterError("branch must be 1 or 2");
    SimConfig c = branch_config(s);
    c.t_end = s.t_star;
    Stepper st(c, branch_options(s, branch));
    return simulate(shared_initial(s), c, st);
}

KneserResult kneser_sweep(const KneserSetup& s, const KneserGrid& grid, int jobs) {
    s.validate();
    if (grid.intervals < 2 || grid.intervals % 2) throw ParameterError("rho intervals must be even and >= 2");
    if (grid.levels < 2) throw ParameterError("at least two refinement levels are needed");
    if (grid.n_grid.empty()) throw ParameterError("empty cutoff grid");
    for (double n : grid.n_grid)
        if (!(n > 0.0)) throw ParameterError("cutoffs must be positive");

    const std::size_t finest = std::size_t(grid.intervals) << (grid.levels - 1);
    std::vector<double> rho(finest + 1);
    for (std::size_t j = 0; j <= finest; ++j) rho[j] = -1.0 + 2.0 * double(j) / double(finest);

    // column ns.size()-1 is always N = inf
    std::vector<double> ns = grid.n_grid;
    ns.push_back(kInfiniteCutoff);
    const std::size_t cols = ns.size();
    std::vector<SwitchedRun> cells((finest + 1) * cols);
    parallel_for(cells.size(), resolve_jobs(jobs), [&](std::size_t c) {
        const std::size_t j = c / cols, i = c % cols;
        cells[c] = run_switched(s, rho[j], ns[i], rho[j] > 0.0 ? 2 : 1);
    });
    auto cell = [&](std::size_t j, std::size_t i) -> const SwitchedRun& { return cells[j * cols + i]; };

    KneserResult res;
    const std::size_t nn = grid.n_grid.size();
    for (int l = 0; l < grid.levels; ++l) {
        const std::size_t stride = std::size_t(1) << (grid.levels - 1 - l);
        std::vector<double> mg(nn, 0.0);
        for (std::size_t i = 0; i < nn; ++i) {
            for (std::size_t j = 0; j <= finest; j += stride) {
                KneserRow row;
                row.level = l;
                row.rho = rho[j];
                row.n_cut = ns[i];
                row.branch = rho[j] > 0.0 ? 2 : 1;
                row.endpoint_norm = std::sqrt(h_norm_sq(cell(j, i).endpoint));
                if (j > 0) row.gap_prev = std::sqrt(h_norm_sq(cell(j, i).endpoint - cell(j - stride, i).endpoint));
                mg[i] = std::max(mg[i], row.gap_prev);
                res.rows.push_back(row);
            }
        }
        res.max_gap.push_back(std::move(mg));
    }
    for (int l = 0; l + 1 < grid.levels; ++l) {
        std::vector<double> r(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            const double fine = res.max_gap[l + 1][i];
            r[i] = fine > 0.0 ? res.max_gap[l][i] / fine : 0.0;
        }
        res.refinement_ratio.push_back(std::move(r));
    }
    res.deviation_from_unmodified.assign(nn, 0.0);
    for (std::size_t j = 0; j <= finest; ++j) {
        res.threshold = std::max(res.threshold, cell(j, cols - 1).max_cutoff_argument);
        for (std::size_t i = 0; i < nn; ++i)
            res.deviation_from_unmodified[i] = std::max(
                res.deviation_from_unmodified[i],
                std::sqrt(h_norm_sq(cell(j, i).endpoint - cell(j, cols - 1).endpoint)));
    }

    // rho = 0 on branch 2 and the pure branch endpoints
    const SpectralField pure1 = branch_trajectory(s, 1).snapshots.back().state;
    const SpectralField pure2 = branch_trajectory(s, 2).snapshots.back().state;
    res.branches_agree_at_zero = true;
    res.endpoints_match_branches = true;
    for (std::size_t i = 0; i < cols; ++i) {
        const SpectralField z2 = run_switched(s, 0.0, ns[i], 2).endpoint;
        if (!z2.identical(cell(finest / 2, i).endpoint)) res.branches_agree_at_zero = false;
        if (!cell(0, i).endpoint.identical(pure1) || !cell(finest, i).endpoint.identical(pure2))
            res.endpoints_match_branches = false;
    }
    return res;
}

}  // namespace bfns
