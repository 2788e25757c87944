#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bfns/dynamics.hpp"
#include "bfns/kneser.hpp"
#include "bfns/stability.hpp"

namespace bfns {

struct KneserSpec {
    KneserGrid grid;
    double t_star = 0.0;
    int branch2_modes = 0;
};

struct AttractorSpec {
    std::size_t seeds = 4;
    std::uint64_t seed = 11;
    double seed_h_norm_sq = 4.0;
    int seed_k_max = 4;
    double t_transient = 10.0;
    double t_sample = 1.0;
    std::size_t n_snapshots = 4;
    // bounded set B evolved towards the cloud
    std::size_t set_size = 4;
    std::uint64_t set_seed = 101;
    double set_h_norm_sq = 4.0;
    double t_decay = 10.0;
    std::size_t sample_stride = 100;
    std::vector<double> r_grid{0.01, 0.1, 1.0};
};

/// A parsed and validated run description.
struct RunConfig {
    SimConfig sim;
    SpectralField initial;
    std::optional<StabilityGrids> stability;
    std::optional<KneserSpec> kneser;
    std::optional<AttractorSpec> attractor;
    /// Every setting after defaults were applied, as one-line JSON with
    /// sorted keys.
    std::string resolved;
};

/// Throws ConfigError on malformed JSON, unknown keys, wrong types or
/// invalid values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace bfns
