#include "bfns/pseudo_spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>

#include "bfns/error.hpp"

namespace bfns {

namespace {
// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();
}  // namespace

PhysicalField::PhysicalField(int d, int m) : dim(d), grid_points(m) {
    data.assign(points() * static_cast<std::size_t>(d), 0.0);
}

std::size_t PhysicalField::points() const noexcept {
    std::size_t n = 1;
    for (int j = 0; j < dim; ++j) n *= static_cast<std::size_t>(grid_points);
    return n;
}

struct PseudoSpectral::Plans {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    ~Plans() {
        std::lock_guard lock(planner_mutex());
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (real) fftw_free(real);
        if (spec) fftw_free(spec);
    }
};

PseudoSpectral::PseudoSpectral(int dim, int modes, int grid_points)
    : dim_(dim), modes_(modes), grid_points_(grid_points), table_(ModeTable::get(dim, modes)) {
    if (grid_points < 2 * modes + 1)
        throw ParameterError("grid size M=" + std::to_string(grid_points) + " cannot resolve K=" +
                             std::to_string(modes));
    const std::size_t m = static_cast<std::size_t>(grid_points);
    const std::size_t last = m / 2 + 1;
    points_ = 1;
    for (int j = 0; j < dim; ++j) points_ *= m;
    half_points_ = points_ / m * last;
    cell_volume_ = std::pow(2.0 * std::numbers::pi / grid_points, dim);

    half_index_.assign(table_->count(), kNoSlot);
    for (std::size_t i = 0; i < table_->count(); ++i) {
        const auto& k = table_->k(i);
        if (k[dim - 1] < 0) continue;
        std::size_t idx = 0;
        for (int j = 0; j < dim - 1; ++j) idx = idx * m + static_cast<std::size_t>((k[j] + grid_points) % grid_points);
        half_index_[i] = idx * last + static_cast<std::size_t>(k[dim - 1]);
    }

    auto plans = std::make_unique<Plans>();
    int n[3] = {grid_points, grid_points, grid_points};
    {
        std::lock_guard lock(planner_mutex());
        plans->real = fftw_alloc_real(points_);
        plans->spec = fftw_alloc_complex(half_points_);
        plans->forward = fftw_plan_dft_r2c(dim, n, plans->real, plans->spec, FFTW_ESTIMATE);
        plans->backward = fftw_plan_dft_c2r(dim, n, plans->spec, plans->real, FFTW_ESTIMATE);
    }
    if (!plans->forward || !plans->backward) throw Error("FFTW planning failed");
    plans_ = plans.release();
}

PseudoSpectral::~PseudoSpectral() { delete plans_; }

PseudoSpectral::PseudoSpectral(PseudoSpectral&& o) noexcept
    : dim_(o.dim_),
      modes_(o.modes_),
      grid_points_(o.grid_points_),
      points_(o.points_),
      half_points_(o.half_points_),
      cell_volume_(o.cell_volume_),
      table_(std::move(o.table_)),
      half_index_(std::move(o.half_index_)),
      plans_(std::exchange(o.plans_, nullptr)) {}

PseudoSpectral& PseudoSpectral::operator=(PseudoSpectral&& o) noexcept {
    if (this != &o) {
        delete plans_;
        dim_ = o.dim_;
        modes_ = o.modes_;
        grid_points_ = o.grid_points_;
        points_ = o.points_;
        half_points_ = o.half_points_;
        cell_volume_ = o.cell_volume_;
        table_ = std::move(o.table_);
        half_index_ = std::move(o.half_index_);
        plans_ = std::exchange(o.plans_, nullptr);
    }
    return *this;
}

void PseudoSpectral::scalar_to_grid(const Complex* values, std::size_t stride, int dir, std::span<double> out) {
    auto* spec = reinterpret_cast<Complex*>(plans_->spec);
    std::fill(spec, spec + half_points_, Complex{});
    for (std::size_t i = 0; i < table_->count(); ++i) {
        const std::size_t slot = half_index_[i];
        if (slot == kNoSlot) continue;
        Complex v = values[i * stride];
        if (dir >= 0) v *= Complex(0.0, double(table_->k(i)[dir]));
        spec[slot] = v;
    }
    fftw_execute(plans_->backward);
    std::copy(plans_->real, plans_->real + points_, out.begin());
}

void PseudoSpectral::scalar_from_grid(std::span<const double> grid, Complex* values, std::size_t stride) {
    std::copy(grid.begin(), grid.end(), plans_->real);
    fftw_execute(plans_->forward);
    const auto* spec = reinterpret_cast<const Complex*>(plans_->spec);
    const double scale = 1.0 / double(points_);
    const std::size_t zero = table_->zero_index();
    for (std::size_t i = zero + 1; i < table_->count(); ++i) {
        const std::size_t mi = table_->mirror(i);
        Complex v = half_index_[i] != kNoSlot ? spec[half_index_[i]] : std::conj(spec[half_index_[mi]]);
        v *= scale;
        values[i * stride] = v;
        values[mi * stride] = std::conj(v);
    }
    values[zero * stride] = Complex{};
}

PhysicalField PseudoSpectral::to_physical(const SpectralField& u) {
    if (!matches(u)) throw ParameterError("field does not match transform shape");
    PhysicalField g(dim_, grid_points_);
    for (int c = 0; c < dim_; ++c) scalar_to_grid(u.coefficients().data() + c, dim_, -1, g.component(c));
    return g;
}

void PseudoSpectral::derivative_to_grid(const SpectralField& v, int comp, int dir, std::span<double> out) {
    if (!matches(v)) throw ParameterError("field does not match transform shape");
    scalar_to_grid(v.coefficients().data() + comp, dim_, dir, out);
}

SpectralField PseudoSpectral::from_physical(const PhysicalField& g) {
    if (g.dim != dim_ || g.grid_points != grid_points_) throw ParameterError("grid does not match transform shape");
    SpectralField u(dim_, modes_);
    for (int c = 0; c < dim_; ++c) scalar_from_grid(g.component(c), u.coefficients().data() + c, dim_);
    return u;
}

}  // namespace bfns
