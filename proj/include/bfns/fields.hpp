#pragma once

#include "bfns/pseudo_spectral.hpp"
#include "bfns/spectral_field.hpp"

namespace bfns {

/// Leray projection c_k -> c_k - k (k.c_k)/|k|^2 with c_0 -> 0.
///
/// Modes that already satisfy the solenoidal test are left untouched, so the
/// projection is bitwise idempotent and the identity on solenoidal input.
/// Only the canonical half of the modes is computed; the other half is set
/// to the conjugate, so the output has exact reality symmetry.
SpectralField leray_project(SpectralField v);

enum class NormKind { H, V, Lp };

/// H inner product (u, v) = (2pi)^d sum_k Re(conj(u_k) . v_k).
double h_inner(const SpectralField& u, const SpectralField& v);
/// |u|^2 = (2pi)^d sum_k |u_k|^2
double h_norm_sq(const SpectralField& u);
/// ||u||^2 = (2pi)^d sum_k |k|^2 |u_k|^2
double v_norm_sq(const SpectralField& u);
/// |Au|^2 = (2pi)^d sum_k |k|^4 |u_k|^2
double au_norm_sq(const SpectralField& u);
/// (2pi/M)^d sum_x |u(x)|^p
double lp_norm_pow(const SpectralField& u, double p, PseudoSpectral& ws);
double lp_norm(const SpectralField& u, double p, PseudoSpectral& ws);
/// H, V or L^p norm; p is used only for NormKind::Lp.
double norm(const SpectralField& u, NormKind kind, PseudoSpectral& ws, double p = 2.0);

/// (Au)_k = |k|^2 u_k
SpectralField stokes_apply(const SpectralField& u);

/// P_m B(u, v): projected, truncated (u.grad) v.
SpectralField advection(const SpectralField& u, const SpectralField& v, PseudoSpectral& ws);

/// b(u, v, w) = sum_ij int u_i d_i v_j w_j dx, evaluated pseudo-spectrally.
double trilinear_b(const SpectralField& u, const SpectralField& v, const SpectralField& w, PseudoSpectral& ws);

/// G(u) = alpha P_m |u|^(beta-1) u. beta == 1 returns alpha*u directly.
SpectralField damping_term(const SpectralField& u, double beta, double alpha, PseudoSpectral& ws);

/// Advection and (alpha-free) damping of one state sharing a single set of
/// transforms. Used by the right-hand side assembly.
struct NonlinearTerms {
    SpectralField advection;    // P_m B(u, u)
    SpectralField damping;      // P_m |u|^(beta-1) u
    double lbeta_pow = 0.0;     // |u|_{beta+1}^{beta+1} by grid quadrature
};
void evaluate_nonlinear(const SpectralField& u, double beta, PseudoSpectral& ws, NonlinearTerms& out);

/// Pointwise |a|^(beta-1) for squared magnitude a_sq.
double damping_weight(double a_sq, double beta) noexcept;

}  // namespace bfns
