#pragma once

#include "vxl/fields.hpp"

namespace vxl {

// Exact spectral differential operators. Every operator accepts either
// representation and returns a spectral field; the Nyquist mode of the
// differentiated axis is dropped.

ScalarField derivative(const ScalarField& f, Axis axis);
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
/// omega_i = eps_{kji} d_k u_j, i.e. omega_1 = d_2 u_3 - d_3 u_2.
VectorField curl(const VectorField& v);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& v);
/// A_ij = d_j v_i.
TensorField3 gradient_tensor(const VectorField& v);
/// H_ij = d_i d_j f (symmetric).
TensorField3 hessian(const ScalarField& f);
/// (v . grad) f.
ScalarField advect(const VectorField& v, const ScalarField& f);
VectorField advect(const VectorField& v, const VectorField& w);

/// Zero-mean solution of laplacian(f) = rhs. Throws NonzeroMean if the k = 0
/// coefficient of rhs exceeds 1e-12 relative to the largest coefficient.
ScalarField solve_poisson(const ScalarField& rhs);

/// Arithmetic mean over grid points (the k = 0 coefficient).
double volume_mean(const ScalarField& f);

/// Zeroes modes outside the two-thirds mask.
ScalarField dealias(const ScalarField& f);
VectorField dealias(const VectorField& v);

/// Zeroes every mode with some |mode_i| >= limit.
ScalarField band_limit(const ScalarField& f, int limit);
VectorField band_limit(const VectorField& v, int limit);

/// Largest |mode_i| carrying a coefficient above `threshold` relative to the
/// largest coefficient; 0 for a constant or zero field.
int max_mode(const ScalarField& f, double threshold = 1e-13);
int max_mode(const VectorField& v, double threshold = 1e-13);

/// Spectral interpolation onto `target` (zero padding or truncation). Both
/// grids must share the box length.
ScalarField resample(const ScalarField& f, const GridPtr& target);
VectorField resample(const VectorField& v, const GridPtr& target);

/// sum over grid points of |f|^2 divided by n^3, evaluated from spectral
/// coefficients (discrete Parseval).
double spectral_mean_square(const ScalarField& f);

}  // namespace vxl
