#pragma once

#include <array>

#include "vxl/report.hpp"

namespace vxl {

/// Pointwise threshold on `relative` for exact identities.
inline constexpr double kPointwiseTolerance = 1e-9;
/// Threshold for volume-mean identities.
inline constexpr double kMeanTolerance = 1e-11;

/// Spectrally interpolates u onto a grid refined by `factor`. Residuals are
/// evaluated there so that divergences of cubic fluxes are alias-free; the
/// input must be band-limited to |mode| < n/4 for exactness.
VectorField verification_field(const VectorField& u, int factor = 2);
ScalarField verification_field(const ScalarField& f, int factor = 2);

/// trA^2 - div(u . grad u).
ResidualReport residual_tr2(const VectorField& u);

/// Coefficient c of the (div w) u term in the trA^3 flux
/// u . grad w - c (div w) u, w = u . grad u.
enum class Tr3Flux {
  half,         ///< c = 1/2
  three_halves  ///< c = 3/2
};

/// trA^3 - div[u . grad(u . grad u) - c (div(u . grad u)) u]. Expansion gives
/// div[...] = trA^3 + (3/2 - c) u . grad(trA^2), so only c = 3/2 vanishes.
ResidualReport residual_tr3(const VectorField& u, Tr3Flux flux = Tr3Flux::half);

/// trA^2 - (trS^2 - |omega|^2 / 2).
ResidualReport residual_tr2_sw(const VectorField& u);
/// trA^3 - (trS^3 + (3/4) omega . S omega).
ResidualReport residual_tr3_sw(const VectorField& u);

/// sum_k d_k((u . grad) d_k u) - (u . grad) lap u, spectral.
VectorField grad_sw_flux(const VectorField& u);

/// |grad S|^2 - |grad omega|^2 / 2 - div(grad_sw_flux(u)).
ResidualReport residual_grad_sw(const VectorField& u);

/// S : hess p - div(u . grad(grad p)) + div(u lap p).
ResidualReport residual_pressure_hessian(const VectorField& u, const ScalarField& p);

/// Gamma_2(f, f) from its iterated definition with L = nu lap + u . grad
/// against nu^2 |hess f|^2 - nu S_ij d_i f d_j f.
ResidualReport gamma2_residual(const VectorField& u, const ScalarField& f, double nu);

/// Volume-mean residuals |<|S|^2> - <|omega|^2>/2|, |<trS^3> + (3/4)<omega.S omega>|
/// and |<|grad S|^2> - <|grad omega|^2>/2|, each relative to the mean absolute
/// value of its left-hand integrand.
std::array<ResidualReport, 3> mean_identities(const VectorField& u);

}  // namespace vxl
