#include "bfns/random_fields.hpp"

#include <algorithm>
#include <cmath>

#include "bfns/error.hpp"
#include "bfns/fields.hpp"

namespace bfns {

namespace {

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() noexcept {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // Uniform on [-1, 1).
    double symmetric() noexcept { return double(next() >> 11) * 0x1.0p-52 - 1.0; }
};

}  // namespace

SpectralField random_solenoidal(int dim, int modes, std::uint64_t seed, double h_norm_sq, int k_max, double decay) {
    if (!(h_norm_sq >= 0.0)) throw ParameterError("target energy must be nonnegative");
    SpectralField u(dim, modes);
    if (h_norm_sq == 0.0) return u;
    const int limit = k_max > 0 ? std::min(k_max, modes) : modes;
    SplitMix64 rng{seed};
    const auto& t = u.table();
    for (std::size_t i = t.zero_index() + 1; i < t.count(); ++i) {
        const auto& k = t.k(i);
        int m = 0;
        for (int j = 0; j < dim; ++j) m = std::max(m, std::abs(k[j]));
        // Draw for every mode so the stream does not depend on k_max.
        Complex c[3];
        for (int j = 0; j < dim; ++j) c[j] = Complex(rng.symmetric(), rng.symmetric());
        if (m > limit) continue;
        const double amp = std::pow(t.k_sq(i), -0.5 * decay);
        for (int j = 0; j < dim; ++j) {
            u.at(i, j) = amp * c[j];
            u.at(t.mirror(i), j) = std::conj(amp * c[j]);
        }
    }
    u = leray_project(std::move(u));
    const double e = ::bfns::h_norm_sq(u);
    if (e > 0.0) u *= std::sqrt(h_norm_sq / e);
    return leray_project(std::move(u));
}

}  // namespace bfns
