#pragma once

#include <cstdint>

#include "bfns/spectral_field.hpp"

namespace bfns {

/// Deterministic pseudo-random solenoidal, mean-free, real field.
///
/// Modes with max_j |k_j| <= k_max (0 means all retained modes) get
/// uniform random complex components with amplitude ~ |k|^(-decay); the
/// result is projected and scaled so that |u|^2 = h_norm_sq. The stream is
/// splitmix64-based, so fields are identical across platforms and builds.
SpectralField random_solenoidal(int dim, int modes, std::uint64_t seed, double h_norm_sq, int k_max = 0,
                                double decay = 1.0);

}  // namespace bfns
