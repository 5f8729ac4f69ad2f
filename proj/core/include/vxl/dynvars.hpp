#pragma once

#include <array>

#include "vxl/fields.hpp"

namespace vxl {

/// Largest pointwise |div u|.
double max_divergence(const VectorField& u);

/// Throws NonSolenoidal when max|div u| > tolerance * max(1, max|grad u|).
void require_solenoidal(const VectorField& u, double tolerance = 1e-10);

/// A_ij = d_j u_i, physical representation. Checks that u is solenoidal.
TensorField3 velocity_gradient(const VectorField& u);

struct StrainVorticity {
  TensorField3 strain;    ///< S = (A + A^T) / 2
  VectorField vorticity;  ///< omega_1 = A_32 - A_23 (cyclic)
};

/// Splits A into its symmetric part and the vorticity of its skew part,
/// A_ij = S_ij + (1/2) eps_{kji} omega_k.
StrainVorticity decompose(const TensorField3& a);

/// Velocity with its first and second derivatives, all physical.
struct VelocityJet {
  VectorField u;
  TensorField3 grad;                 ///< A_ij = d_j u_i
  std::array<TensorField3, 3> dgrad; ///< dgrad[k](i, j) = d_k A_ij
  TensorField3 strain;
  VectorField vorticity;

  /// d_k S_ij
  TensorField3 strain_derivative(int k) const;
  /// d_k omega_i as a tensor (i, k).
  TensorField3 vorticity_gradient() const;
};

VelocityJet velocity_jet(const VectorField& u);

struct InvariantFields {
  ScalarField trA2;
  ScalarField trA3;
  ScalarField trS2;
  ScalarField trS3;
  ScalarField enstrophy;      ///< |omega|^2
  ScalarField omega_S_omega;  ///< omega . S omega
  ScalarField grad_S_sq;      ///< sum_{ijk} (d_k S_ij)^2
  ScalarField grad_omega_sq;  ///< sum_{ik} (d_k omega_i)^2
  ScalarField variance_P;     ///< (1/3) sum of squared pairwise eigenvalue gaps
};

/// All products are formed pointwise in physical space.
InvariantFields invariants(const VectorField& u);
InvariantFields invariants(const VelocityJet& jet);

/// Eigenvalues of a symmetric 3x3 matrix given by its upper triangle
/// (s00, s01, s02, s11, s12, s22), sorted descending. Closed-form
/// trigonometric solution of the characteristic cubic.
std::array<double, 3> symmetric_eigenvalues(const std::array<double, 6>& s);

struct StrainEigenvalues {
  ScalarField a;  ///< largest
  ScalarField b;
  ScalarField c;  ///< smallest
};

StrainEigenvalues strain_eigenvalues(const TensorField3& strain);

struct EigenvalueSpread {
  ScalarField P;                ///< ((a-b)^2 + (b-c)^2 + (c-a)^2) / 3
  ScalarField trS2_over_three;  ///< statistical variance of {a, b, c}
};

EigenvalueSpread variance_P(const StrainEigenvalues& eigs);

/// <u . omega>.
double mean_helicity(const VectorField& u);

}  // namespace vxl
