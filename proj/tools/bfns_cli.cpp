// bfns: command-line driver for the damped / globally modified NSE solver.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bfns/attractor.hpp"
#include "bfns/config.hpp"
#include "bfns/energy.hpp"
#include "bfns/error.hpp"
#include "bfns/fields.hpp"
#include "bfns/integrate.hpp"
#include "bfns/io.hpp"
#include "bfns/kneser.hpp"
#include "bfns/stability.hpp"

using namespace bfns;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

std::string fmt(double x) { return format_double(x); }

std::filesystem::path sibling(const std::string& out, const std::string& suffix) {
    std::filesystem::path p(out);
    p.replace_extension();
    p += suffix;
    return p;
}

void header(CsvTable& t, const std::string& command, const RunConfig& rc) {
    t.comments.insert(t.comments.begin(), {"bfns " + command, "config: " + rc.resolved});
}

int cmd_simulate(const std::string& config, const std::string& out) {
    const RunConfig rc = load_config(config);
    try {
        const Trajectory tr = simulate(rc.initial, rc.sim);
        write_trajectory(tr, out);
        std::cout << "wrote " << tr.snapshots.size() << " snapshots to " << out << "\n";
        if (tr.projected_initial) std::cout << "note: initial state was projected\n";
        return kOk;
    } catch (const BlowUpError& e) {
        const std::string partial = out + ".partial";
        Trajectory empty;
        empty.config = rc.sim;
        write_trajectory(e.partial() ? *e.partial() : empty, partial);
        std::cerr << "blow-up at t = " << fmt(e.time()) << ": " << e.what() << "; partial trajectory in " << partial
                  << "\n";
        return kNumerical;
    }
}

// Physical parameters in a trajectory header must match the config.
void check_header(const SimConfig& file, const SimConfig& cfg) {
    if (file.dim != cfg.dim || file.modes != cfg.modes || file.beta != cfg.beta || file.mu != cfg.mu ||
        file.alpha != cfg.alpha || file.n_cut != cfg.n_cut)
        throw ConfigError("trajectory header does not match the config");
}

std::optional<double> order_from_rerun(const Trajectory& tr, SimConfig cfg) {
    if (tr.snapshots.size() < 2) return std::nullopt;
    cfg.tau = tr.snapshots.front().t;
    cfg.t_end = tr.snapshots.back().t;
    cfg.snapshot_stride = 1 << 30;
    try {
        cfg.steps();
        const auto coarse = build_ledger(simulate(tr.snapshots.front().state, cfg));
        cfg.dt *= 0.5;
        const auto fine = build_ledger(simulate(tr.snapshots.front().state, cfg));
        return audit_energy_equality(coarse, &fine).order_estimate;
    } catch (const Error&) {
        return std::nullopt;
    }
}

int cmd_energy_audit(const std::string& path, const std::string& config, const std::string& csv, double tol) {
    Trajectory tr = read_trajectory(path);
    SimConfig cfg = tr.config;
    std::optional<RunConfig> rc;
    if (!config.empty()) {
        rc = load_config(config);
        check_header(tr.config, rc->sim);
        cfg = rc->sim;
        cfg.tau = tr.config.tau;
        cfg.t_end = tr.config.t_end;
    }
    if (tr.snapshots.empty()) throw FormatError(path + ": trajectory has no snapshots");
    tr.config.forcing = cfg.forcing;
    tr.config.grid_points = cfg.grid_points;
    tr.diagnostics = diagnostics_from_snapshots(tr);
    const EnergyLedger L = build_ledger(tr);
    const bool equality = equality_regime(cfg);
    EnergyAudit a = audit_energy_equality(L);
    a.order_estimate = order_from_rerun(tr, cfg);

    std::cout << "mode: " << (equality ? "equality" : "inequality") << "\n";
    std::cout << "max_drift: " << fmt(a.max_drift) << "\n";
    std::cout << "relative_drift: " << fmt(a.relative_drift()) << "\n";
    std::cout << "max_increase: " << fmt(a.max_increase) << "\n";
    std::cout << "order_estimate: " << (a.order_estimate ? fmt(*a.order_estimate) : std::string("n/a")) << "\n";
    if (!csv.empty()) {
        CsvTable t = ledger_table(L);
        t.comments = {"bfns energy-audit", "source: " + path};
        if (rc) t.comments.push_back("config: " + rc->resolved);
        write_csv(t, csv);
    }
    const double scale = a.scale > 0.0 ? a.scale : 1.0;
    if (equality && a.relative_drift() > tol) {
        std::cerr << "energy drift " << fmt(a.relative_drift()) << " exceeds tolerance " << fmt(tol) << "\n";
        return kNumerical;
    }
    if (!equality && a.max_increase / scale > tol)
        std::cout << "note: V increased by " << fmt(a.max_increase / scale) << " (relative)\n";
    return kOk;
}

int cmd_stability(const std::string& config, const std::string& out, int jobs) {
    const RunConfig rc = load_config(config);
    if (!rc.stability) throw ConfigError("config has no 'stability' block");
    StabilityReport rep;
    try {
        rep = continuity_sweep(rc.sim, leray_project(rc.initial), *rc.stability, jobs);
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    CsvTable t = stability_table(rep);
    header(t, "stability-sweep", rc);
    t.comments.push_back("max_ratio: " + fmt(rep.max_ratio));
    t.comments.push_back("median_ratio: " + fmt(rep.median_ratio));
    for (const auto& [k, m] : rep.median_by_kind) t.comments.push_back("median_ratio " + k + ": " + fmt(m));
    t.comments.push_back("max_spread: " + fmt(rep.max_spread));
    t.comments.push_back("gamma_hat: " + fmt(rep.gamma_hat));
    t.comments.push_back("failed_rows: " + std::to_string(rep.failed_rows));
    write_csv(t, out);
    std::cout << rep.rows.size() << " rows, max ratio " << fmt(rep.max_ratio) << "\n";
    return rep.failed_rows == rep.rows.size() ? kNumerical : kOk;
}

int cmd_kneser(const std::string& config, const std::string& out, int jobs) {
    const RunConfig rc = load_config(config);
    if (!rc.kneser) throw ConfigError("config has no 'kneser' block");
    KneserSetup s;
    s.base = rc.sim;
    s.u_tau = leray_project(rc.initial);
    s.t_star = rc.kneser->t_star;
    s.branch2_modes = rc.kneser->branch2_modes;
    KneserResult res;
    try {
        s.validate();
        res = kneser_sweep(s, rc.kneser->grid, jobs);
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    CsvTable t = kneser_table(res);
    header(t, "kneser-sweep", rc);
    t.comments.push_back("branches: 1 = full truncation, 2 = Galerkin truncation to branch2_modes (surrogate)");
    const auto& ng = rc.kneser->grid.n_grid;
    for (std::size_t i = 0; i < ng.size(); ++i) {
        std::string line = "n_cut " + fmt(ng[i]) + ": max_gap";
        for (const auto& lvl : res.max_gap) line += " " + fmt(lvl[i]);
        line += "; ratio";
        for (const auto& r : res.refinement_ratio) line += " " + fmt(r[i]);
        line += "; deviation " + fmt(res.deviation_from_unmodified[i]);
        t.comments.push_back(line);
    }
    t.comments.push_back("threshold: " + fmt(res.threshold));
    t.comments.push_back(std::string("branches_agree_at_zero: ") + (res.branches_agree_at_zero ? "yes" : "no"));
    t.comments.push_back(std::string("endpoints_match_branches: ") + (res.endpoints_match_branches ? "yes" : "no"));
    write_csv(t, out);
    std::cout << res.rows.size() << " endpoint rows, threshold " << fmt(res.threshold) << "\n";
    return kOk;
}

int cmd_attractor(const std::string& config, const std::string& out, int jobs) {
    const RunConfig rc = load_config(config);
    if (!rc.attractor) throw ConfigError("config has no 'attractor' block");
    const AttractorSpec& a = *rc.attractor;
    const SimConfig& c = rc.sim;
    AttractorCloud cloud;
    DistanceSeries series;
    std::vector<RegularityRow> reg;
    try {
        const auto seeds = seed_set(c.dim, c.modes, a.seed, a.seeds, a.seed_h_norm_sq, a.seed_k_max);
        cloud = estimate_attractor(seeds, c, a.t_transient, a.t_sample, a.n_snapshots, jobs);
        if (cloud.failed_seeds == seeds.size()) {
            std::cerr << "every seed blew up\n";
            return kNumerical;
        }
        const auto B = seed_set(c.dim, c.modes, a.set_seed, a.set_size, a.set_h_norm_sq, a.seed_k_max);
        SimConfig d = c;
        d.tau = 0.0;
        d.t_end = a.t_decay;
        series = distance_decay(B, cloud.states, d, a.sample_stride, jobs);
        reg = regularity_probe(simulate(B.front(), d), a.r_grid);
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }

    CsvTable t = distance_table(series);
    header(t, "attractor", rc);
    t.comments.push_back("radius_sq: " + fmt(cloud.radius_sq));
    t.comments.push_back("cloud_size: " + std::to_string(cloud.states.size()));
    t.comments.push_back("cloud_max_h_norm_sq: " + fmt(cloud.max_h_norm_sq));
    t.comments.push_back("cloud_diameter: " + fmt(cloud.diameter));
    t.comments.push_back("failed_seeds: " + std::to_string(cloud.failed_seeds));
    t.comments.push_back("dist_v_log_slope: " + fmt(log_slope(series.t, series.dist_v)));
    write_csv(t, out);

    CsvTable r = regularity_table(reg);
    header(r, "attractor", rc);
    write_csv(r, sibling(out, ".regularity.csv").string());

    Trajectory ct;
    ct.config = c;
    for (std::size_t i = 0; i < cloud.states.size(); ++i) ct.snapshots.push_back({double(i), cloud.states[i]});
    write_trajectory(ct, sibling(out, ".cloud.bfns").string());
    std::cout << "cloud of " << cloud.states.size() << " states, final dist_h " << fmt(series.dist_h.back()) << "\n";
    return kOk;
}

int cmd_export(const std::string& path, const std::string& config, const std::string& out) {
    Trajectory tr = read_trajectory(path);
    if (!config.empty()) {
        const RunConfig rc = load_config(config);
        check_header(tr.config, rc.sim);
        tr.config.forcing = rc.sim.forcing;
        tr.config.grid_points = rc.sim.grid_points;
    }
    tr.diagnostics = diagnostics_from_snapshots(tr);
    CsvTable t = ledger_table(build_ledger(tr));
    t.comments = {"bfns export", "source: " + path};
    write_csv(t, out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Damped and globally modified Navier-Stokes experiments on the periodic box"};
    app.require_subcommand(1);

    std::string config, out, traj_path, csv, kind;
    int jobs = 1;
    double tol = 1e-4;

    auto* sim = app.add_subcommand("simulate", "integrate a config and write a trajectory file");
    sim->add_option("--config", config, "run config (JSON)")->required();
    sim->add_option("--out", out, "trajectory file")->required();

    auto* audit = app.add_subcommand("energy-audit", "energy equality / inequality audit of a trajectory");
    audit->add_option("trajectory", traj_path, "trajectory file")->required();
    audit->add_option("--config", config, "config supplying forcing and dt");
    audit->add_option("--csv", csv, "write the energy ledger");
    audit->add_option("--tolerance", tol, "relative drift tolerance")->capture_default_str();

    auto add_sweep = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--config", config, "run config (JSON)")->required();
        s->add_option("--out", out, "CSV report")->required();
        s->add_option("--jobs", jobs, "worker threads")->capture_default_str();
        return s;
    };
    auto* stab = add_sweep("stability-sweep", "continuous-dependence sweep");
    auto* kn = add_sweep("kneser-sweep", "switching construction endpoint sweep");
    auto* att = add_sweep("attractor", "absorbing set, attractor cloud and distance decay");
    auto* sweep = add_sweep("sweep", "run a sweep by kind");
    sweep->add_option("kind", kind, "stability, kneser or attractor")
        ->required()
        ->check(CLI::IsMember({"stability", "kneser", "attractor"}));

    auto* exp = app.add_subcommand("export", "energy ledger CSV of a trajectory");
    exp->add_option("trajectory", traj_path, "trajectory file")->required();
    exp->add_option("--config", config, "config supplying forcing");
    exp->add_option("--out", out, "CSV file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*sim) return cmd_simulate(config, out);
        if (*audit) return cmd_energy_audit(traj_path, config, csv, tol);
        if (*stab || (*sweep && kind == "stability")) return cmd_stability(config, out, jobs);
        if (*kn || (*sweep && kind == "kneser")) return cmd_kneser(config, out, jobs);
        if (*att || (*sweep && kind == "attractor")) return cmd_attractor(config, out, jobs);
        if (*exp) return cmd_export(traj_path, config, out);
    } catch (const BlowUpError& e) {
        std::cerr << "blow-up at t = " << fmt(e.time()) << ": " << e.what() << "\n";
        return kNumerical;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}
