#include "bfns/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "bfns/error.hpp"

namespace bfns {

namespace {

double torus_volume(int dim) { return std::pow(2.0 * std::numbers::pi, dim); }

struct ModeResidual {
    double residual;
    double scale;
};

ModeResidual divergence_residual(const Complex* c, const Wavevector& k, int dim) {
    Complex s{};
    double scale = 0.0;
    for (int j = 0; j < dim; ++j) {
        s += double(k[j]) * c[j];
        scale += std::abs(k[j]) * std::abs(c[j]);
    }
    return {std::abs(s), scale};
}

void require_match(const PseudoSpectral& ws, const SpectralField& u) {
    if (!ws.matches(u)) throw ParameterError("field shape does not match the transform workspace");
}

// Truncated (u.grad) v and, optionally, the projected result.
SpectralField convective_product(const SpectralField& u, const SpectralField& v, PseudoSpectral& ws) {
    if (!u.same_shape(v)) throw ParameterError("advection operands differ in shape");
    require_match(ws, u);
    const int d = u.dim();
    const std::size_t n = ws.points();
    std::vector<double> ug(n * d), grad(n), prod(n * d, 0.0);
    for (int j = 0; j < d; ++j) ws.scalar_to_grid(u.coefficients().data() + j, d, -1, {ug.data() + j * n, n});
    for (int i = 0; i < d; ++i) {
        double* out = prod.data() + i * n;
        for (int j = 0; j < d; ++j) {
            ws.derivative_to_grid(v, i, j, grad);
            const double* uj = ug.data() + j * n;
            for (std::size_t x = 0; x < n; ++x) out[x] += uj[x] * grad[x];
        }
    }
    SpectralField out(d, u.modes());
    for (int i = 0; i < d; ++i) ws.scalar_from_grid({prod.data() + i * n, n}, out.coefficients().data() + i, d);
    return out;
}

}  // namespace

SpectralField leray_project(SpectralField v) {
    if (v.empty()) throw InvalidFieldError("cannot project an empty field");
    if (!all_finite(v)) throw InvalidFieldError("non-finite coefficient in projection input");
    const auto& t = v.table();
    const int d = v.dim();
    const std::size_t zero = t.zero_index();
    for (int c = 0; c < d; ++c) v.at(zero, c) = Complex{};
    for (std::size_t i = zero + 1; i < t.count(); ++i) {
        Complex* c = &v.at(i, 0);
        const auto& k = t.k(i);
        auto res = divergence_residual(c, k, d);
        if (res.residual > kSolenoidalTolerance * res.scale) {
            double input_scale = 0.0;
            for (int j = 0; j < d; ++j) input_scale = std::max(input_scale, std::abs(c[j]));
            for (int pass = 0; pass < 4 && res.residual > kSolenoidalTolerance * res.scale; ++pass) {
                Complex s{};
                for (int j = 0; j < d; ++j) s += double(k[j]) * c[j];
                const Complex q = s / t.k_sq(i);
                for (int j = 0; j < d; ++j) c[j] -= double(k[j]) * q;
                res = divergence_residual(c, k, d);
            }
            double out_scale = 0.0;
            for (int j = 0; j < d; ++j) out_scale = std::max(out_scale, std::abs(c[j]));
            // Pure gradient to rounding: nothing solenoidal survives.
            if (res.residual > kSolenoidalTolerance * res.scale || out_scale <= 64.0 * 2.2e-16 * input_scale)
                for (int j = 0; j < d; ++j) c[j] = Complex{};
        }
        const std::size_t mi = t.mirror(i);
        for (int j = 0; j < d; ++j) v.at(mi, j) = std::conj(c[j]);
    }
    return v;
}

double h_inner(const SpectralField& u, const SpectralField& v) {
    if (!u.same_shape(v)) throw ParameterError("inner product operands differ in shape");
    const auto a = u.coefficients();
    const auto b = v.coefficients();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    return torus_volume(u.dim()) * s;
}

double h_norm_sq(const SpectralField& u) {
    double s = 0.0;
    for (const auto& c : u.coefficients()) s += std::norm(c);
    return torus_volume(u.dim()) * s;
}

double v_norm_sq(const SpectralField& u) {
    const auto& t = u.table();
    double s = 0.0;
    for (std::size_t i = 0; i < t.count(); ++i) {
        double m = 0.0;
        for (int c = 0; c < u.dim(); ++c) m += std::norm(u.at(i, c));
        s += t.k_sq(i) * m;
    }
    return torus_volume(u.dim()) * s;
}

double au_norm_sq(const SpectralField& u) {
    const auto& t = u.table();
    double s = 0.0;
    for (std::size_t i = 0; i < t.count(); ++i) {
        double m = 0.0;
        for (int c = 0; c < u.dim(); ++c) m += std::norm(u.at(i, c));
        s += t.k_sq(i) * t.k_sq(i) * m;
    }
    return torus_volume(u.dim()) * s;
}

double lp_norm_pow(const SpectralField& u, double p, PseudoSpectral& ws) {
    if (!(p >= 1.0)) throw ParameterError("L^p norm requires p >= 1");
    require_match(ws, u);
    const PhysicalField g = ws.to_physical(u);
    const std::size_t n = g.points();
    double s = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double a_sq = 0.0;
        for (int c = 0; c < g.dim; ++c) a_sq += g.component(c)[x] * g.component(c)[x];
        s += p == 2.0 ? a_sq : std::pow(a_sq, 0.5 * p);
    }
    return ws.cell_volume() * s;
}

double lp_norm(const SpectralField& u, double p, PseudoSpectral& ws) {
    return std::pow(lp_norm_pow(u, p, ws), 1.0 / p);
}

double norm(const SpectralField& u, NormKind kind, PseudoSpectral& ws, double p) {
    switch (kind) {
        case NormKind::H: return std::sqrt(h_norm_sq(u));
        case NormKind::V: return std::sqrt(v_norm_sq(u));
        case NormKind::Lp: return lp_norm(u, p, ws);
    }
    throw ParameterError("unknown norm kind");
}

SpectralField stokes_apply(const SpectralField& u) {
    SpectralField out = u;
    const auto& t = u.table();
    for (std::size_t i = 0; i < t.count(); ++i)
        for (int c = 0; c < u.dim(); ++c) out.at(i, c) *= t.k_sq(i);
    return out;
}

SpectralField advection(const SpectralField& u, const SpectralField& v, PseudoSpectral& ws) {
    return leray_project(convective_product(u, v, ws));
}

double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w, PseudoSpectral& ws) {
    if (!u.same_shape(w)) throw ParameterError("trilinear form operands differ in shape");
    return h_inner(w, convective_product(u, v, ws));
}

double damping_weight(double a_sq, double beta) noexcept {
    if (beta == 1.0) return 1.0;
    if (beta == 2.0) return std::sqrt(a_sq);
    if (beta == 3.0) return a_sq;
    if (beta == 5.0) return a_sq * a_sq;
    return std::pow(a_sq, 0.5 * (beta - 1.0));
}

void evaluate_nonlinear(const SpectralField& u, double beta, PseudoSpectral& ws, NonlinearTerms& out) {
    if (!(beta >= 1.0)) throw ParameterError("damping exponent beta must be >= 1");
    require_match(ws, u);
    const int d = u.dim();
    const std::size_t n = ws.points();
    std::vector<double> ug(n * d), grad(n), adv(n * d, 0.0), damp(n * d);
    for (int j = 0; j < d; ++j) ws.scalar_to_grid(u.coefficients().data() + j, d, -1, {ug.data() + j * n, n});
    for (int i = 0; i < d; ++i) {
        double* a = adv.data() + i * n;
        for (int j = 0; j < d; ++j) {
            ws.derivative_to_grid(u, i, j, grad);
            const double* uj = ug.data() + j * n;
            for (std::size_t x = 0; x < n; ++x) a[x] += uj[x] * grad[x];
        }
    }
    double lbeta = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double a_sq = 0.0;
        for (int c = 0; c < d; ++c) a_sq += ug[c * n + x] * ug[c * n + x];
        const double w = damping_weight(a_sq, beta);
        lbeta += w * a_sq;
        for (int c = 0; c < d; ++c) damp[c * n + x] = w * ug[c * n + x];
    }

    SpectralField a(d, u.modes());
    for (int i = 0; i < d; ++i) ws.scalar_from_grid({adv.data() + i * n, n}, a.coefficients().data() + i, d);
    out.advection = leray_project(std::move(a));

    if (beta == 1.0) {
        out.damping = u;
        out.lbeta_pow = h_norm_sq(u);
        return;
    }
    SpectralField g(d, u.modes());
    for (int i = 0; i < d; ++i) ws.scalar_from_grid({damp.data() + i * n, n}, g.coefficients().data() + i, d);
    out.damping = leray_project(std::move(g));
    out.lbeta_pow = ws.cell_volume() * lbeta;
}

SpectralField damping_term(const SpectralField& u, double beta, double alpha, PseudoSpectral& ws) {
    if (!(beta >= 1.0)) throw ParameterError("damping exponent beta must be >= 1");
    if (beta == 1.0) {
        SpectralField out = u;
        out *= alpha;
        return out;
    }
    require_match(ws, u);
    const int d = u.dim();
    const std::size_t n = ws.points();
    const PhysicalField g = ws.to_physical(u);
    std::vector<double> damp(n * d);
    for (std::size_t x = 0; x < n; ++x) {
        double a_sq = 0.0;
        for (int c = 0; c < d; ++c) a_sq += g.component(c)[x] * g.component(c)[x];
        const double w = damping_weight(a_sq, beta);
        for (int c = 0; c < d; ++c) damp[c * n + x] = w * g.component(c)[x];
    }
    SpectralField out(d, u.modes());
    for (int i = 0; i < d; ++i) ws.scalar_from_grid({damp.data() + i * n, n}, out.coefficients().data() + i, d);
    out = leray_project(std::move(out));
    out *= alpha;
    return out;
}

}  // namespace bfns
