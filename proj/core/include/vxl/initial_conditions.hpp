#pragma once

#include <cstdint>
#include <string_view>

#include "vxl/evolution.hpp"

namespace vxl {

enum class InitialKind { taylor_green, abc, random_isotropic };

InitialKind parse_initial_kind(std::string_view name);
std::string_view to_string(InitialKind kind);

struct InitialConditionParams {
  /// ABC coefficients.
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  /// Spectral peak for random_isotropic, in units of the fundamental wavenumber.
  double k0 = 4.0;
  /// Kinetic energy (1/2)<|u|^2> for random_isotropic.
  double energy = 0.5;
  /// Keep only modes with every |mode_i| < band_limit; 0 selects the
  /// two-thirds mask.
  int band_limit = 0;

  void validate(InitialKind kind) const;
};

/// Dimensional state at t = 0 with viscosity nu.
///
/// taylor_green: u = (sin x cos y cos z, -cos x sin y cos z, 0)
/// abc:          u = (A sin z + C cos y, B sin x + A cos z, C sin y + B cos x)
/// random_isotropic: Gaussian solenoidal field with E(k) ~ k^4 exp(-2 (k/k0)^2),
///   rescaled to the requested energy; reproducible from `seed`.
FlowState initial_condition(InitialKind kind, const GridPtr& grid, const InitialConditionParams& params,
                            std::uint64_t seed, double nu);

}  // namespace vxl
