#pragma once

// Shared fixtures and brute-force oracles for the unit tests. The oracles
// evaluate trigonometric sums directly and never touch FFTW.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "bfns/dynamics.hpp"
#include "bfns/fields.hpp"
#include "bfns/random_fields.hpp"
#include "bfns/spectral_field.hpp"

namespace bfns::test {

inline constexpr double kPi = std::numbers::pi;

/// Raw (not projected) random real mean-free field.
inline SpectralField raw_field(int dim, int modes, std::uint64_t seed, double amp = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-amp, amp);
    SpectralField u(dim, modes);
    const auto& tab = u.table();
    for (std::size_t i = tab.zero_index() + 1; i < tab.count(); ++i)
        for (int c = 0; c < dim; ++c) u.set_mode(tab.k(i), c, Complex(U(rng), U(rng)));
    return u;
}

inline SpectralField solenoidal(int dim, int modes, std::uint64_t seed, double h_norm_sq = 1.0, int k_max = 0) {
    return random_solenoidal(dim, modes, seed, h_norm_sq, k_max, 1.0);
}

/// Standard desk fixture: d=2, K=16, M=64, beta=3.
inline SimConfig desk_config() {
    SimConfig c;
    c.mu = 1.0;
    c.alpha = 1.0;
    c.beta = 3.0;
    c.dim = 2;
    c.modes = 16;
    c.dt = 1e-3;
    c.tau = 0.0;
    c.t_end = 0.25;
    return c;
}

inline SpectralField low_mode_forcing(int dim, int modes, double amp) {
    SpectralField f(dim, modes);
    f.set_mode({1, 1, 0}, 0, Complex(amp, 0.0));
    f.set_mode({1, 1, 0}, 1, Complex(-amp, 0.0));
    f.set_mode({0, 2, 0}, 0, Complex(0.0, amp));
    return leray_project(std::move(f));
}

/// Grid values of every component of u on an M^d grid, by direct summation.
/// Layout: comp-major, points in lexicographic order (first index slowest).
inline std::vector<double> direct_grid(const SpectralField& u, int M) {
    const int d = u.dim();
    const auto& tab = u.table();
    std::size_t npts = 1;
    for (int j = 0; j < d; ++j) npts *= std::size_t(M);
    const int K = u.modes();
    // e[j * (2K+1) + (k+K)] over x index: table of exp(i k x_n)
    std::vector<Complex> ex(std::size_t(M) * (2 * K + 1));
    for (int n = 0; n < M; ++n)
        for (int k = -K; k <= K; ++k) ex[std::size_t(n) * (2 * K + 1) + (k + K)] = std::polar(1.0, 2 * kPi * k * n / M);
    std::vector<double> out(std::size_t(d) * npts, 0.0);
    for (std::size_t p = 0; p < npts; ++p) {
        int idx[3] = {0, 0, 0};
        std::size_t rem = p;
        for (int j = d - 1; j >= 0; --j) {
            idx[j] = int(rem % M);
            rem /= M;
        }
        for (int c = 0; c < d; ++c) {
            Complex s = 0.0;
            for (std::size_t m = 0; m < tab.count(); ++m) {
                Complex e = 1.0;
                for (int j = 0; j < d; ++j) e *= ex[std::size_t(idx[j]) * (2 * K + 1) + (tab.k(m)[j] + K)];
                s += u.at(m, c) * e;
            }
            out[std::size_t(c) * npts + p] = s.real();
        }
    }
    return out;
}

/// Coefficients |k_j| <= K of d grid components by direct DFT.
inline SpectralField direct_coefficients(const std::vector<double>& g, int dim, int modes, int M) {
    SpectralField u(dim, modes);
    std::size_t npts = 1;
    for (int j = 0; j < dim; ++j) npts *= std::size_t(M);
    const auto& tab = u.table();
    for (std::size_t m = 0; m < tab.count(); ++m) {
        for (int c = 0; c < dim; ++c) {
            Complex s = 0.0;
            for (std::size_t p = 0; p < npts; ++p) {
                std::size_t rem = p;
                double phase = 0.0;
                for (int j = dim - 1; j >= 0; --j) {
                    phase += tab.k(m)[j] * double(rem % M);
                    rem /= M;
                }
                s += g[std::size_t(c) * npts + p] * std::polar(1.0, -2 * kPi * phase / M);
            }
            u.at(m, c) = s / double(npts);
        }
    }
    return u;
}

/// d_j applied to every component: coefficients times i k_j.
inline SpectralField partial(const SpectralField& u, int j) {
    SpectralField out = u;
    for (std::size_t m = 0; m < u.mode_count(); ++m)
        for (int c = 0; c < u.dim(); ++c) out.at(m, c) *= Complex(0.0, double(u.table().k(m)[j]));
    return out;
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) { return max_abs_coefficient(a - b); }

}  // namespace bfns::test
