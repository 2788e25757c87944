#include "bfns/config.hpp"

#include <cmath>
#include <set>

#include "bfns/error.hpp"
#include "bfns/fields.hpp"
#include "bfns/io.hpp"
#include "bfns/random_fields.hpp"
#include "json.hpp"

namespace bfns {

namespace {

using nlohmann::json;

// Reads keys from one JSON object and rejects the ones nobody asked for.
class Section {
public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw ConfigError(name_ + ": expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
        return v.get<double>();
    }

    double number_or_inf(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return to_number_or_inf(raw(key), where(key));
    }

    long long integer(const std::string& key, long long fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
        return v.get<long long>();
    }

    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback, bool allow_inf = false) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(where(key) + ": expected an array");
        std::vector<double> out;
        for (const auto& e : v) {
            if (allow_inf)
                out.push_back(to_number_or_inf(e, where(key)));
            else if (e.is_number())
                out.push_back(e.get<double>());
            else
                throw ConfigError(where(key) + ": expected numbers");
        }
        return out;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!used_.count(it.key())) throw ConfigError(name_ + ": unknown key '" + it.key() + "'");
    }

    std::string where(const std::string& key) const { return name_ + "." + key; }

    static double to_number_or_inf(const json& v, const std::string& where) {
        if (v.is_number()) return v.get<double>();
        if (v.is_string() && v.get<std::string>() == "inf") return kInfiniteCutoff;
        throw ConfigError(where + ": expected a number or \"inf\"");
    }

private:
    const json& j_;
    std::string name_;
    std::set<std::string> used_;
};

json encode_cutoff(double n) { return n == kInfiniteCutoff ? json("inf") : json(n); }

SpectralField read_modes(Section& sec, const std::string& key, int dim, int modes, json& resolved) {
    SpectralField u(dim, modes);
    resolved = json::array();
    if (!sec.has(key)) return u;
    const json& list = sec.raw(key);
    if (!list.is_array()) throw ConfigError(sec.where(key) + ": expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
        Section m(list[i], sec.where(key) + "[" + std::to_string(i) + "]");
        if (!m.has("k")) throw ConfigError(m.where("k") + ": missing");
        const json& kj = m.raw("k");
        if (!kj.is_array() || int(kj.size()) != dim) throw ConfigError(m.where("k") + ": expected d integers");
        Wavevector k{0, 0, 0};
        bool zero = true;
        for (int j = 0; j < dim; ++j) {
            if (!kj[j].is_number_integer()) throw ConfigError(m.where("k") + ": expected integers");
            k[j] = kj[j].get<int>();
            if (std::abs(k[j]) > modes) throw ConfigError(m.where("k") + ": outside the retained modes");
            zero = zero && k[j] == 0;
        }
        if (zero) throw ConfigError(m.where("k") + ": the zero mode is excluded");
        const long long comp = m.integer("component", 0);
        if (comp < 0 || comp >= dim) throw ConfigError(m.where("component") + ": out of range");
        const double re = m.number("re", 0.0), im = m.number("im", 0.0);
        m.finish();
        u.set_mode(k, int(comp), Complex(re, im));
        resolved.push_back({{"k", kj}, {"component", comp}, {"re", re}, {"im", im}});
    }
    return leray_project(std::move(u));
}

RunConfig build(const json& doc) {
    RunConfig rc;
    SimConfig& c = rc.sim;
    json res;
    Section top(doc, "config");
    for (const char* required : {"physics", "discretization"})
        if (!top.has(required)) throw ConfigError(std::string("config: missing section '") + required + "'");

    {
        Section s(top.raw("physics"), "physics");
        c.mu = s.number("mu", 1.0);
        c.alpha = s.number("alpha", 1.0);
        c.beta = s.number("beta", 3.0);
        c.n_cut = s.number_or_inf("n_cut", kInfiniteCutoff);
        s.finish();
        res["physics"] = {{"mu", c.mu}, {"alpha", c.alpha}, {"beta", c.beta}, {"n_cut", encode_cutoff(c.n_cut)}};
    }
    {
        Section s(top.raw("discretization"), "discretization");
        c.dim = int(s.integer("d", 2));
        c.modes = int(s.integer("k_modes", 16));
        if (c.dim != 2 && c.dim != 3) throw ConfigError("discretization.d: must be 2 or 3");
        if (c.modes < 1 || c.modes > 512) throw ConfigError("discretization.k_modes: out of range");
        c.grid_points = int(s.integer("grid_m", 4 * c.modes));
        c.dt = s.number("dt", 1e-3);
        c.tau = s.number("tau", 0.0);
        c.t_end = s.number("t_end", 1.0);
        c.snapshot_stride = int(s.integer("snapshot_stride", 1));
        s.finish();
        res["discretization"] = {{"d", c.dim},   {"k_modes", c.modes}, {"grid_m", c.grid()}, {"dt", c.dt},
                                 {"tau", c.tau}, {"t_end", c.t_end},   {"snapshot_stride", c.snapshot_stride}};
    }
    try {
        c.validate();
        c.steps();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }

    if (top.has("forcing")) {
        Section s(top.raw("forcing"), "forcing");
        const std::string kind = s.text("kind", "zero");
        json modes;
        if (kind == "modes") {
            c.forcing = read_modes(s, "modes", c.dim, c.modes, modes);
        } else if (kind != "zero") {
            throw ConfigError("forcing.kind: expected \"zero\" or \"modes\"");
        }
        s.finish();
        res["forcing"] = {{"kind", kind}};
        if (kind == "modes") res["forcing"]["modes"] = modes;
    } else {
        res["forcing"] = {{"kind", "zero"}};
    }

    rc.initial = SpectralField(c.dim, c.modes);
    if (top.has("initial")) {
        Section s(top.raw("initial"), "initial");
        const std::string kind = s.text("kind", "zero");
        res["initial"] = {{"kind", kind}};
        if (kind == "random") {
            const long long seed = s.integer("seed", 1);
            const double e = s.number("h_norm_sq", 1.0);
            const long long kmax = s.integer("k_max", 0);
            if (seed < 0) throw ConfigError("initial.seed: must be nonnegative");
            if (!(e >= 0.0)) throw ConfigError("initial.h_norm_sq: must be nonnegative");
            rc.initial = random_solenoidal(c.dim, c.modes, std::uint64_t(seed), e, int(kmax), 1.0);
            res["initial"].update({{"seed", seed}, {"h_norm_sq", e}, {"k_max", kmax}});
        } else if (kind == "modes") {
            json modes;
            rc.initial = read_modes(s, "modes", c.dim, c.modes, modes);
            res["initial"]["modes"] = modes;
        } else if (kind != "zero") {
            throw ConfigError("initial.kind: expected \"zero\", \"modes\" or \"random\"");
        }
        s.finish();
    } else {
        res["initial"] = {{"kind", "zero"}};
    }

    if (top.has("stability")) {
        Section s(top.raw("stability"), "stability");
        StabilityGrids g;
        g.eps = s.numbers("eps", {});
        g.delta = s.numbers("delta", {});
        g.eta = s.numbers("eta", {});
        const long long seed = s.integer("perturbation_seed", 7);
        if (seed < 0) throw ConfigError("stability.perturbation_seed: must be nonnegative");
        g.seed = std::uint64_t(seed);
        s.finish();
        res["stability"] = {{"eps", g.eps}, {"delta", g.delta}, {"eta", g.eta}, {"perturbation_seed", seed}};
        rc.stability = g;
    }

    if (top.has("kneser")) {
        Section s(top.raw("kneser"), "kneser");
        KneserSpec k;
        k.grid.intervals = int(s.integer("intervals", 8));
        k.grid.levels = int(s.integer("levels", 2));
        k.grid.n_grid = s.numbers("n_grid", {1.0, 4.0, 16.0}, true);
        // default t* on the dt grid near tau + 0.6 (T - tau)
        const double span = c.t_end - c.tau;
        const double def = c.tau + std::round(0.6 * span / c.dt) * c.dt;
        k.t_star = s.number("t_star", def);
        k.branch2_modes = int(s.integer("branch2_modes", std::max(1, c.modes / 2)));
        s.finish();
        json ng = json::array();
        for (double n : k.grid.n_grid) ng.push_back(encode_cutoff(n));
        res["kneser"] = {{"intervals", k.grid.intervals}, {"levels", k.grid.levels}, {"n_grid", ng},
                         {"t_star", k.t_star},            {"branch2_modes", k.branch2_modes}};
        rc.kneser = k;
    }

    if (top.has("attractor")) {
        Section s(top.raw("attractor"), "attractor");
        AttractorSpec a;
        auto count = [&](const char* key, long long def) {
            const long long v = s.integer(key, def);
            if (v < 0) throw ConfigError(s.where(key) + ": must be nonnegative");
            return v;
        };
        a.seeds = std::size_t(count("seeds", (long long)a.seeds));
        a.seed = std::uint64_t(count("seed", (long long)a.seed));
        a.seed_h_norm_sq = s.number("seed_h_norm_sq", a.seed_h_norm_sq);
        a.seed_k_max = int(count("seed_k_max", a.seed_k_max));
        a.t_transient = s.number("t_transient", a.t_transient);
        a.t_sample = s.number("t_sample", a.t_sample);
        a.n_snapshots = std::size_t(count("n_snapshots", (long long)a.n_snapshots));
        a.set_size = std::size_t(count("set_size", (long long)a.set_size));
        a.set_seed = std::uint64_t(count("set_seed", (long long)a.set_seed));
        a.set_h_norm_sq = s.number("set_h_norm_sq", a.set_h_norm_sq);
        a.t_decay = s.number("t_decay", a.t_decay);
        a.sample_stride = std::size_t(count("sample_stride", (long long)a.sample_stride));
        a.r_grid = s.numbers("r_grid", a.r_grid);
        s.finish();
        if (a.seeds == 0 || a.n_snapshots == 0 || a.set_size == 0 || a.sample_stride == 0)
            throw ConfigError("attractor: counts must be positive");
        res["attractor"] = {{"seeds", a.seeds},
                            {"seed", a.seed},
                            {"seed_h_norm_sq", a.seed_h_norm_sq},
                            {"seed_k_max", a.seed_k_max},
                            {"t_transient", a.t_transient},
                            {"t_sample", a.t_sample},
                            {"n_snapshots", a.n_snapshots},
                            {"set_size", a.set_size},
                            {"set_seed", a.set_seed},
                            {"set_h_norm_sq", a.set_h_norm_sq},
                            {"t_decay", a.t_decay},
                            {"sample_stride", a.sample_stride},
                            {"r_grid", a.r_grid}};
        rc.attractor = a;
    }
    top.finish();
    rc.resolved = res.dump();
    return rc;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    try {
        return build(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text);
}

}  // namespace bfns
