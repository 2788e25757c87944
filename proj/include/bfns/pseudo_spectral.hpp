#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bfns/spectral_field.hpp"

namespace bfns {

/// Real samples of a d-component field on the uniform M^d grid over
/// [0, 2pi)^d. Component-major: data[c * points() + x], x in row-major
/// order with the first coordinate slowest.
struct PhysicalField {
    int dim = 0;
    int grid_points = 0;
    std::vector<double> data;

    PhysicalField() = default;
    PhysicalField(int d, int m);

    std::size_t points() const noexcept;
    std::span<double> component(int c) noexcept { return {data.data() + c * points(), points()}; }
    std::span<const double> component(int c) const noexcept { return {data.data() + c * points(), points()}; }
};

/// FFT plans and scratch for one (d, K, M) discretization. Not thread-safe:
/// use one instance per worker.
class PseudoSpectral {
public:
    PseudoSpectral(int dim, int modes, int grid_points);
    ~PseudoSpectral();
    PseudoSpectral(const PseudoSpectral&) = delete;
    PseudoSpectral& operator=(const PseudoSpectral&) = delete;
    PseudoSpectral(PseudoSpectral&&) noexcept;
    PseudoSpectral& operator=(PseudoSpectral&&) noexcept;

    int dim() const noexcept { return dim_; }
    int modes() const noexcept { return modes_; }
    int grid_points() const noexcept { return grid_points_; }
    std::size_t points() const noexcept { return points_; }
    /// Quadrature weight (2pi/M)^d.
    double cell_volume() const noexcept { return cell_volume_; }
    const ModeTable& table() const noexcept { return *table_; }

    bool matches(const SpectralField& u) const noexcept { return u.dim() == dim_ && u.modes() == modes_; }

    /// Evaluates sum_k values[k * stride] * (i k_dir, if dir >= 0) exp(i k.x) on the grid.
    void scalar_to_grid(const Complex* values, std::size_t stride, int dir, std::span<double> out);
    /// Analysis transform of grid samples; writes retained modes with exact
    /// conjugate symmetry and a zero mean.
    void scalar_from_grid(std::span<const double> grid, Complex* values, std::size_t stride);

    PhysicalField to_physical(const SpectralField& u);
    /// Grid samples of d v_c / d x_dir.
    void derivative_to_grid(const SpectralField& v, int comp, int dir, std::span<double> out);
    /// Truncating analysis transform (no projection).
    SpectralField from_physical(const PhysicalField& g);

private:
    struct Plans;

    int dim_ = 0;
    int modes_ = 0;
    int grid_points_ = 0;
    std::size_t points_ = 0;
    std::size_t half_points_ = 0;
    double cell_volume_ = 0.0;
    std::shared_ptr<const ModeTable> table_;
    std::vector<std::size_t> half_index_;  // r2c slot for modes with k_last >= 0
    Plans* plans_ = nullptr;
};

}  // namespace bfns
