#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bfns {

using Complex = std::complex<double>;
using Wavevector = std::array<int, 3>;

/// Retained wavevectors of the cube [-K, K]^d in lexicographic order
/// (first component slowest). Mode i and mode count-1-i are k and -k.
class ModeTable {
public:
    static std::shared_ptr<const ModeTable> get(int dim, int modes);

    ModeTable(int dim, int modes);

    int dim() const noexcept { return dim_; }
    int modes() const noexcept { return modes_; }
    int side() const noexcept { return 2 * modes_ + 1; }
    std::size_t count() const noexcept { return k_.size(); }
    std::size_t zero_index() const noexcept { return (count() - 1) / 2; }
    std::size_t mirror(std::size_t i) const noexcept { return count() - 1 - i; }

    const Wavevector& k(std::size_t i) const noexcept { return k_[i]; }
    double k_sq(std::size_t i) const noexcept { return k_sq_[i]; }
    std::size_t index_of(const Wavevector& k) const;
    bool contains(const Wavevector& k) const noexcept;

private:
    int dim_;
    int modes_;
    std::vector<Wavevector> k_;
    std::vector<double> k_sq_;
};

/// Truncated Fourier coefficients of a d-component velocity field on the
/// 2pi-periodic torus, u(x) = sum_k c_k exp(i k.x), |k_j| <= K. Storage is
/// mode-major with the d components of each mode adjacent.
///
/// The class itself does not enforce the invariants (mean-free, reality,
/// solenoidal, finite) so that raw fields can be projected; see validate_field().
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(int dim, int modes);

    int dim() const noexcept { return table_ ? table_->dim() : 0; }
    int modes() const noexcept { return table_ ? table_->modes() : 0; }
    std::size_t mode_count() const noexcept { return table_ ? table_->count() : 0; }
    bool empty() const noexcept { return !table_; }
    const ModeTable& table() const noexcept { return *table_; }

    Complex& at(std::size_t mode, int comp) noexcept { return data_[mode * dim() + comp]; }
    const Complex& at(std::size_t mode, int comp) const noexcept { return data_[mode * dim() + comp]; }
    Complex& at(const Wavevector& k, int comp) { return at(table_->index_of(k), comp); }
    const Complex& at(const Wavevector& k, int comp) const { return at(table_->index_of(k), comp); }

    std::span<Complex> coefficients() noexcept { return data_; }
    std::span<const Complex> coefficients() const noexcept { return data_; }

    /// Sets c_k[comp] = value and c_{-k}[comp] = conj(value).
    void set_mode(const Wavevector& k, int comp, Complex value);
    void set_zero() noexcept;

    bool same_shape(const SpectralField& other) const noexcept;
    /// Bitwise comparison of every coefficient.
    bool identical(const SpectralField& other) const noexcept;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s) noexcept;
    /// this += s * other
    SpectralField& add_scaled(double s, const SpectralField& other);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
    friend bool operator==(const SpectralField& a, const SpectralField& b) noexcept { return a.identical(b); }

private:
    std::shared_ptr<const ModeTable> table_;
    std::vector<Complex> data_;
};

/// Embeds or truncates u onto the cube of half-width `modes`.
SpectralField resize_modes(const SpectralField& u, int modes);

/// Zeroes every mode with max_j |k_j| > limit.
void truncate_modes(SpectralField& u, int limit);

/// Relative per-mode tolerance on |k.c_k| used for the solenoidal test.
inline constexpr double kSolenoidalTolerance = 16.0 * 2.220446049250313e-16;

bool all_finite(const SpectralField& u) noexcept;
bool is_mean_free(const SpectralField& u) noexcept;
bool has_reality_symmetry(const SpectralField& u) noexcept;
/// |k.c_k| <= kSolenoidalTolerance * sum_j |k_j||c_kj| for every mode.
bool is_solenoidal(const SpectralField& u) noexcept;
double max_abs_coefficient(const SpectralField& u) noexcept;

/// Returns a description of the first violated invariant, if any.
std::optional<std::string> invariant_violation(const SpectralField& u);
/// Throws InvalidFieldError when an invariant is violated.
void validate_field(const SpectralField& u);

}  // namespace bfns
