#include "bfns/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

#include "bfns/error.hpp"

namespace bfns {

ModeTable::ModeTable(int dim, int modes) : dim_(dim), modes_(modes) {
    if (dim != 2 && dim != 3) throw ParameterError("dimension must be 2 or 3, got " + std::to_string(dim));
    if (modes < 1) throw ParameterError("mode cutoff K must be >= 1");
    const int n = side();
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(n);
    k_.resize(total);
    k_sq_.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        Wavevector k{0, 0, 0};
        std::size_t rem = i;
        for (int j = dim - 1; j >= 0; --j) {
            k[j] = static_cast<int>(rem % n) - modes;
            rem /= n;
        }
        k_[i] = k;
        k_sq_[i] = double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    }
}

std::shared_ptr<const ModeTable> ModeTable::get(int dim, int modes) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const ModeTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, modes}];
    if (!slot) slot = std::make_shared<const ModeTable>(dim, modes);
    return slot;
}

bool ModeTable::contains(const Wavevector& k) const noexcept {
    for (int j = 0; j < dim_; ++j)
        if (k[j] < -modes_ || k[j] > modes_) return false;
    for (int j = dim_; j < 3; ++j)
        if (k[j] != 0) return false;
    return true;
}

std::size_t ModeTable::index_of(const Wavevector& k) const {
    if (!contains(k)) throw ParameterError("wavevector outside the retained mode cube");
    std::size_t idx = 0;
    for (int j = 0; j < dim_; ++j) idx = idx * side() + static_cast<std::size_t>(k[j] + modes_);
    return idx;
}

SpectralField::SpectralField(int dim, int modes)
    : table_(ModeTable::get(dim, modes)), data_(table_->count() * dim) {}

void SpectralField::set_mode(const Wavevector& k, int comp, Complex value) {
    if (comp < 0 || comp >= dim()) throw ParameterError("component index out of range");
    const std::size_t i = table_->index_of(k);
    if (i == table_->zero_index()) {
        at(i, comp) = Complex(value.real(), 0.0);
        return;
    }
    at(i, comp) = value;
    at(table_->mirror(i), comp) = std::conj(value);
}

void SpectralField::set_zero() noexcept { std::fill(data_.begin(), data_.end(), Complex{}); }

bool SpectralField::same_shape(const SpectralField& other) const noexcept {
    return dim() == other.dim() && modes() == other.modes();
}

bool SpectralField::identical(const SpectralField& other) const noexcept {
    if (!same_shape(other)) return false;
    return data_.empty() || std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(Complex)) == 0;
}

namespace {
void require_same_shape(const SpectralField& a, const SpectralField& b) {
    if (!a.same_shape(b)) throw ParameterError("spectral field shape mismatch");
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) noexcept {
    for (auto& c : data_) c *= s;
    return *this;
}

SpectralField& SpectralField::add_scaled(double s, const SpectralField& other) {
    require_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * other.data_[i];
    return *this;
}

SpectralField resize_modes(const SpectralField& u, int modes) {
    SpectralField out(u.dim(), modes);
    const auto& src = u.table();
    for (std::size_t i = 0; i < src.count(); ++i) {
        if (!out.table().contains(src.k(i))) continue;
        const std::size_t j = out.table().index_of(src.k(i));
        for (int c = 0; c < u.dim(); ++c) out.at(j, c) = u.at(i, c);
    }
    return out;
}

void truncate_modes(SpectralField& u, int limit) {
    const auto& t = u.table();
    for (std::size_t i = 0; i < t.count(); ++i) {
        const auto& k = t.k(i);
        int m = 0;
        for (int j = 0; j < u.dim(); ++j) m = std::max(m, std::abs(k[j]));
        if (m > limit)
            for (int c = 0; c < u.dim(); ++c) u.at(i, c) = Complex{};
    }
}

bool all_finite(const SpectralField& u) noexcept {
    for (const auto& c : u.coefficients())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

bool is_mean_free(const SpectralField& u) noexcept {
    const std::size_t z = u.table().zero_index();
    for (int c = 0; c < u.dim(); ++c)
        if (u.at(z, c) != Complex{}) return false;
    return true;
}

bool has_reality_symmetry(const SpectralField& u) noexcept {
    const auto& t = u.table();
    for (std::size_t i = 0; i < t.count(); ++i) {
        const std::size_t m = t.mirror(i);
        for (int c = 0; c < u.dim(); ++c)
            if (u.at(m, c) != std::conj(u.at(i, c))) return false;
    }
    return true;
}

bool is_solenoidal(const SpectralField& u) noexcept {
    const auto& t = u.table();
    for (std::size_t i = 0; i < t.count(); ++i) {
        const auto& k = t.k(i);
        Complex s{};
        double scale = 0.0;
        for (int c = 0; c < u.dim(); ++c) {
            s += double(k[c]) * u.at(i, c);
            scale += std::abs(k[c]) * std::abs(u.at(i, c));
        }
        if (std::abs(s) > kSolenoidalTolerance * scale) return false;
    }
    return true;
}

double max_abs_coefficient(const SpectralField& u) noexcept {
    double m = 0.0;
    for (const auto& c : u.coefficients()) m = std::max(m, std::abs(c));
    return m;
}

std::optional<std::string> invariant_violation(const SpectralField& u) {
    if (u.empty()) return "empty field";
    if (!all_finite(u)) return "non-finite coefficient";
    if (!is_mean_free(u)) return "nonzero mean mode";
    if (!has_reality_symmetry(u)) return "reality symmetry violated";
    if (!is_solenoidal(u)) return "field is not solenoidal";
    return std::nullopt;
}

void validate_field(const SpectralField& u) {
    if (auto why = invariant_violation(u)) throw InvalidFieldError("invalid spectral field: " + *why);
}

}  // namespace bfns
