#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "vxl/report.hpp"

namespace vxl {

enum class ViscosityMode { dimensional, dimensionless };

/// Velocity (spectral, divergence-free) at time t, with either a viscosity
/// nu or a Reynolds number Re. In dimensionless mode the viscous coefficient
/// is 1/Re.
struct FlowState {
  VectorField u;
  double t = 0.0;
  ViscosityMode mode = ViscosityMode::dimensional;
  double nu_or_re = 0.0;

  static FlowState dimensional(VectorField u, double nu, double t = 0.0);
  static FlowState dimensionless(VectorField u, double re, double t = 0.0);

  /// Coefficient of the Laplacian.
  double viscosity() const;
  /// Throws on a nonpositive coefficient or a velocity that is not solenoidal.
  void validate() const;
};

/// Two-thirds dealiasing and integrating-factor RK4 are fixed.
struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double output_interval = 0.1;
  double cfl = 0.5;

  void validate() const;
  /// Number of steps between outputs; output_interval must be a multiple of dt.
  std::int64_t steps_per_output() const;
  std::int64_t output_count() const;
};

/// L, U and nu, with kappa = L / U and Re = U L / nu.
struct DimensionlessScaling {
  double length = 1.0;
  double velocity = 1.0;
  double viscosity = 1.0;

  double kappa() const { return length / velocity; }
  double reynolds() const { return velocity * length / viscosity; }
  void validate() const;
};

/// u - grad(solve_poisson(div u)) computed mode by mode: u - k (k . u) / |k|^2.
VectorField leray_project(const VectorField& v);

/// Zero-mean p with lap p = -div(u . grad u).
ScalarField pressure_from_velocity(const VectorField& u);

/// nu lap u - P[dealias(u . grad u)], spectral.
VectorField ns_rhs(const FlowState& state);

/// Largest dt allowed by dt <= cfl * dx / max|u|; +inf for u = 0.
double cfl_bound(const VectorField& u, double cfl = 0.5);

/// Integrating-factor RK4 stepper. Keeps workspace and exponential factors
/// for one grid and dt; the nonlinear term is evaluated in rotational form
/// u x omega and projected.
class Stepper {
 public:
  Stepper(GridPtr grid, double viscosity, double dt, double cfl = 0.5);
  ~Stepper();
  Stepper(Stepper&&) noexcept;
  Stepper& operator=(Stepper&&) noexcept;

  /// Advances state by dt in place. Throws CflViolation before touching the
  /// state when dt exceeds the bound.
  void advance(FlowState& state);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One step of size config.dt.
FlowState step(const FlowState& state, const SolverConfig& config);

enum class EvolutionCheck {
  vorticity,
  energy,
  enstrophy,
  strain,
  trS2,
  trS3,
};

EvolutionCheck parse_evolution_check(std::string_view name);
std::string_view to_string(EvolutionCheck which);
inline constexpr EvolutionCheck kAllEvolutionChecks[] = {EvolutionCheck::vorticity, EvolutionCheck::energy,
                                                         EvolutionCheck::enstrophy, EvolutionCheck::strain,
                                                         EvolutionCheck::trS2,      EvolutionCheck::trS3};

/// Residual of (d/dt - L*) q - rhs with L* = nu lap - u . grad and d/dt
/// taken by the chain rule from ns_rhs. Evaluated on the 2x refined grid.
///
/// Reports per check:
///   vorticity  "vorticity"
///   energy     "energy" with rhs -nu|omega|^2 + nu div(u x omega) - 2 div(p u),
///              "energy_gradient_form" with rhs -2 nu |grad u|^2 - 2 div(p u)
///   enstrophy  "enstrophy" for |omega|^2 / 2
///   strain     "strain"
///   trS2       "trS2" (local form), "trS2_divergence" (flux form with
///              coefficient 1 on (div w) u), "trS2_divergence_coefficient3",
///              and "trS2_forms_agreement" comparing the local and flux
///              right-hand sides
///   trS3       "trS3[(trS2)^2]" and "trS3[trS4]"; the smaller residual is
///              flagged expected_exact
std::vector<ResidualReport> evolution_residual(const FlowState& state, EvolutionCheck which);

/// phi(x, t) = u(L x, kappa t) / U with Re = U L / nu. The grid is rescaled
/// to box length L_box / L.
FlowState nondimensionalize(const FlowState& state, const DimensionlessScaling& scaling);
FlowState redimensionalize(const FlowState& state, const DimensionlessScaling& scaling);

}  // namespace vxl
