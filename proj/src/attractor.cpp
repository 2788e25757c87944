#include "bfns/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bfns/error.hpp"
#include "bfns/fields.hpp"
#include "bfns/parallel.hpp"
#include "bfns/random_fields.hpp"

namespace bfns {

namespace {

std::size_t steps_for(const SimConfig& cfg, double span) {
    SimConfig c = cfg;
    c.tau = 0.0;
    c.t_end = span;
    return c.steps();
}

double distance(const SpectralField& a, const SpectralField& b, NormKind kind) {
    const SpectralField d = a - b;
    return std::sqrt(kind == NormKind::V ? v_norm_sq(d) : h_norm_sq(d));
}

}  // namespace

double absorbing_radius(double mu, double forcing_norm_sq, double lambda1) {
    if (!(mu > 0.0) || !(lambda1 > 0.0)) throw ParameterError("mu and lambda_1 must be positive");
    const double r = mu * lambda1;
    return forcing_norm_sq / (r * r);
}

double absorbing_radius(double mu, const SpectralField& f, double lambda1) {
    return absorbing_radius(mu, f.empty() ? 0.0 : h_norm_sq(f), lambda1);
}

double semidistance(const std::vector<SpectralField>& x, const std::vector<SpectralField>& y, NormKind kind) {
    if (kind == NormKind::Lp) throw ParameterError("semidistance supports the H and V norms");
    if (x.empty()) return 0.0;
    if (y.empty()) throw ParameterError("semidistance to an empty set");
    double sup = 0.0;
    for (const auto& a : x) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : y) {
            best = std::min(best, distance(a, b, kind));
            if (best == 0.0) break;
        }
        sup = std::max(sup, best);
    }
    return sup;
}

std::vector<SpectralField> seed_set(int dim, int modes, std::uint64_t seed, std::size_t count, double h_norm_sq,
                                    int k_max) {
    std::vector<SpectralField> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(random_solenoidal(dim, modes, seed + 0x9e37 * i, h_norm_sq, k_max, 1.0));
    return out;
}

AttractorCloud estimate_attractor(const std::vector<SpectralField>& seeds, const SimConfig& cfg, double t_transient,
                                  double t_sample, std::size_t n_snapshots, int jobs) {
    cfg.validate();
    if (!(t_transient > 0.0)) throw ParameterError("t_transient must be positive");
    if (seeds.empty() || n_snapshots == 0) throw ParameterError("need at least one seed and one snapshot");
    const std::size_t n_tr = steps_for(cfg, t_transient);
    const std::size_t n_sp = n_snapshots > 1 ? steps_for(cfg, t_sample) : 1;
    if (n_sp == 0) throw ParameterError("t_sample must be positive");
    const std::size_t last = n_tr + (n_snapshots - 1) * n_sp;

    struct SeedResult {
        std::vector<SpectralField> states;
        std::vector<double> times;
        bool failed = false;
    };
    std::vector<SeedResult> per(seeds.size());
    parallel_for(seeds.size(), resolve_jobs(jobs), [&](std::size_t i) {
        validate_field(seeds[i]);
        Stepper st(cfg);
        SpectralField u = seeds[i];
        try {
            for (std::size_t n = 0;; ++n) {
                if (n >= n_tr && (n - n_tr) % n_sp == 0) {
                    per[i].states.push_back(u);
                    per[i].times.push_back(cfg.time_at(n));
                }
                if (n == last) break;
                u = st.step(u, cfg.time_at(n)).next;
            }
        } catch (const BlowUpError&) {
            per[i] = SeedResult{};
            per[i].failed = true;
        }
    });

    AttractorCloud cloud;
    cloud.radius_sq = absorbing_radius(cfg.mu, cfg.forcing_norm_sq());
    for (auto& p : per) {
        cloud.seed_status.push_back(p.failed ? "blowup" : "ok");
        if (p.failed) ++cloud.failed_seeds;
        for (std::size_t k = 0; k < p.states.size(); ++k) {
            cloud.max_h_norm_sq = std::max(cloud.max_h_norm_sq, h_norm_sq(p.states[k]));
            cloud.states.push_back(std::move(p.states[k]));
            cloud.times.push_back(p.times[k]);
        }
    }
    for (std::size_t a = 0; a < cloud.states.size(); ++a)
        for (std::size_t b = a + 1; b < cloud.states.size(); ++b)
            cloud.diameter = std::max(cloud.diameter, distance(cloud.states[a], cloud.states[b], NormKind::H));
    return cloud;
}

DistanceSeries distance_decay(const std::vector<SpectralField>& B, const std::vector<SpectralField>& cloud,
                              const SimConfig& cfg, std::size_t sample_stride, int jobs) {
    cfg.validate();
    if (cloud.empty()) throw ParameterError("attractor cloud is empty");
    if (sample_stride == 0) throw ParameterError("sample stride must be positive");
    const std::size_t n = cfg.steps();
    std::vector<std::size_t> samples;
    for (std::size_t k = 0; k <= n; k += sample_stride) samples.push_back(k);
    if (samples.back() != n) samples.push_back(n);

    // per member, per sample: min distance to the cloud
    std::vector<std::vector<double>> dh(B.size(), std::vector<double>(samples.size()));
    std::vector<std::vector<double>> dv = dh;
    parallel_for(B.size(), resolve_jobs(jobs), [&](std::size_t i) {
        validate_field(B[i]);
        Stepper st(cfg);
        SpectralField u = B[i];
        std::size_t next = 0;
        for (std::size_t k = 0;; ++k) {
            if (k == samples[next]) {
                const std::vector<SpectralField> one{u};
                dh[i][next] = semidistance(one, cloud, NormKind::H);
                dv[i][next] = semidistance(one, cloud, NormKind::V);
                if (++next == samples.size()) break;
            }
            u = st.step(u, cfg.time_at(k)).next;
        }
    });

    DistanceSeries out;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        double h = 0.0, v = 0.0;
        for (std::size_t i = 0; i < B.size(); ++i) {
            h = std::max(h, dh[i][s]);
            v = std::max(v, dv[i][s]);
        }
        out.t.push_back(cfg.time_at(samples[s]));
        out.dist_h.push_back(h);
        out.dist_v.push_back(v);
    }
    return out;
}

double log_slope(const std::vector<double>& t, const std::vector<double>& y) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < t.size() && i < y.size(); ++i) {
        if (!(y[i] > 0.0) || !std::isfinite(y[i])) continue;
        const double ly = std::log(y[i]);
        sx += t[i];
        sy += ly;
        sxx += t[i] * t[i];
        sxy += t[i] * ly;
        ++m;
    }
    if (m < 2) return 0.0;
    const double den = double(m) * sxx - sx * sx;
    return den > 0.0 ? (double(m) * sxy - sx * sy) / den : 0.0;
}

std::vector<RegularityRow> regularity_probe(const Trajectory& traj, const std::vector<double>& r_grid) {
    for (double r : r_grid)
        if (!(r > 0.0)) throw ParameterError("probe window start r must be positive");
    RightHandSide rhs(traj.config);
    PseudoSpectral& ws = rhs.workspace();
    struct Sample {
        double t, v, au, ut, lb;
    };
    std::vector<Sample> samples;
    for (const auto& s : traj.snapshots) {
        const SpectralField ut = rhs.full(s.state);
        samples.push_back({s.t, v_norm_sq(s.state), std::sqrt(au_norm_sq(s.state)), std::sqrt(h_norm_sq(ut)),
                           lp_norm_pow(s.state, traj.config.beta + 1.0, ws)});
    }
    const double t0 = traj.start_time();
    std::vector<RegularityRow> out;
    for (double r : r_grid) {
        RegularityRow row;
        row.r = r;
        for (const auto& s : samples) {
            // tolerate rounding in t0 + r against the stored step times
            if (s.t - t0 < r * (1.0 - 1e-12)) continue;
            row.v_norm_sq = std::max(row.v_norm_sq, s.v);
            row.au_norm = std::max(row.au_norm, s.au);
            row.ut_norm = std::max(row.ut_norm, s.ut);
            row.lbeta_pow = std::max(row.lbeta_pow, s.lb);
            ++row.samples;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace bfns
