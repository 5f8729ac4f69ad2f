#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "vxl/evolution.hpp"

namespace vxl {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

/// sigma = sqrt(Re / 2) and elapsed time delta.
struct KernelParams {
  double sigma = 1.0;
  double delta = 1.0;

  static KernelParams from_reynolds(double re, double delta);
  double reynolds() const { return 2.0 * sigma * sigma; }
  void validate() const;
};

/// Standard normal CDF and its complement, via erfc.
double phi(double a);
double psi(double a);

/// p^beta(x, t, y) = e^{-(r - beta t)^2 / 2t} / sqrt(2 pi t) + beta Psi((r - beta t) / sqrt(t)),
/// r = |x - y|. Throws InvalidArgument for t <= 0.
double p_beta(double x, double t, double y, double beta);
/// (2 pi t)^{-1/2} int_{r/sqrt t}^inf z exp(-(z - beta sqrt t)^2 / 2) dz by
/// adaptive Gauss-Kronrod quadrature.
double p_beta_integral(double x, double t, double y, double beta);

/// sigma^3 (2 pi t)^{-3/2} exp(-|sigma(x - xi) -/+ sigma t 1|^2 / 2t); sign = +1 or -1.
double gamma_pm(const Vec3& xi, const Vec3& x, double t, double sigma, int sign);

/// Transition density of dX = phi dt + sigma^{-1} dB for constant phi.
double constant_drift_kernel(const Vec3& xi, const Vec3& x, const KernelParams& params, const Vec3& drift);

/// sigma^3 prod_i p^{beta}(sigma xi_i, delta, sigma x_i).
double kernel_product_bound(const Vec3& xi, const Vec3& x, const KernelParams& params, double beta);

struct KernelBoundsOptions {
  /// Offsets x - xi per axis span +/-(delta + width * sqrt(delta) / sigma).
  int points_per_axis = 21;
  double width = 6.0;
  /// Base points xi on a cube lattice of this many points per axis in [-1, 1].
  int base_points_per_axis = 3;
};

struct KernelBoundsReport {
  double sigma = 0.0;
  double delta = 0.0;
  Vec3 drift{};
  std::size_t points = 0;
  /// min over the lattice of (Gamma - lower) / upper and (upper - Gamma) / upper
  /// with lower = sigma^3 prod p^{-sigma} and upper = sigma^3 prod p^{sigma}.
  double min_slack_lower = 0.0;
  double min_slack_upper = 0.0;
  double tolerance = 1e-12;
  /// Whether sigma^3 prod p^{sigma} <= Gamma <= sigma^3 prod p^{-sigma} held at
  /// every lattice point.
  bool reversed_order_holds = false;

  bool passed() const { return min_slack_lower >= -tolerance && min_slack_upper >= -tolerance; }
};

/// Throws InvalidArgument when some |drift_i| > 1.
KernelBoundsReport kernel_bounds_check(const KernelParams& params, const Vec3& drift,
                                       const KernelBoundsOptions& options = {});

/// Drift for the Monte Carlo path; `constant` is set for uniform drifts so
/// the exact kernel is available for a goodness-of-fit test.
struct DriftField {
  std::function<Vec3(const Vec3&)> field;
  std::optional<Vec3> constant;

  static DriftField uniform(const Vec3& v);
  static DriftField of(std::function<Vec3(const Vec3&)> f);
};

struct MonteCarloOptions {
  std::int64_t samples = 100000;
  std::int64_t batch_size = 10000;
  int cells_per_axis = 12;
  /// Histogram box half-width in units of sqrt(delta) / sigma.
  double box_half_width = 3.0;
  int steps = 200;
};

struct MonteCarloReport {
  std::int64_t samples = 0;
  int steps = 0;
  std::size_t cells = 0;
  std::size_t violating_cells = 0;
  double violation_fraction = 0.0;
  Vec3 sample_mean{};
  Vec3 box_center{};
  double cell_width = 0.0;
  /// Goodness of fit against the exact kernel; only for uniform drifts.
  std::optional<double> chi_square;
  std::optional<int> degrees_of_freedom;
  std::optional<double> p_value;

  bool passed(double max_fraction = 0.01) const { return violation_fraction <= max_fraction; }
};

/// Euler-Maruyama paths of dX = phi(X) dt + sigma^{-1} dB from xi over delta
/// in `steps` steps, binned on a cubic histogram around the sample mean and
/// compared with cell averages of the product bounds. A cell violates when
/// its density lies more than 3 standard errors outside [lower, upper].
/// Batches draw from independent mt19937_64 streams seeded from (seed, batch).
MonteCarloReport monte_carlo_kernel_check(const KernelParams& params, const Vec3& xi, const DriftField& drift,
                                          std::uint64_t seed, const MonteCarloOptions& options = {});

/// f_+/-(sigma, xi, delta, x) = sigma p^{+/-sigma}(sigma xi, delta, sigma x).
double f_pm(double sigma, double xi, double delta, double x, int sign);

/// The Psi part of f_pm: sign * sigma^2 * Psi(sigma (r - sign delta) / sqrt(delta)).
double f_pm_psi_term(double sigma, double r, double delta, int sign);
/// Psi(sigma (r - sign delta) / sqrt(delta)), which tends to 0, 1 or 1/2 as
/// sigma grows with sigma^2 delta fixed according to the sign of r - sign delta.
double f_pm_psi_factor(double sigma, double r, double delta, int sign);

/// e^{-3 sigma^2 delta / 2}.
double memory_factor(const KernelParams& params);

/// e^{-3 sigma^2 delta/2} (theta + delta Gamma theta) + sigma * ball integral of
/// theta over |xi - x| < delta. The ball integral is the grid mean over
/// points in the (periodic) ball times (4/3) pi delta^3.
/// Throws InvalidArgument if Gamma is not symmetric or not traceless (1e-12).
VectorField short_time_vorticity_step(const VectorField& theta, const Mat3& gamma, const KernelParams& params);

/// e^{delta Gamma} applied to the heat-and-advection propagator
/// e^{-|k|^2 delta / Re} e^{-i k . phi delta} of theta.
VectorField exact_linear_vorticity_step(const VectorField& theta, const Mat3& gamma, const Vec3& drift,
                                        const KernelParams& params);

/// e^{t M} for symmetric M via eigendecomposition.
Mat3 symmetric_matrix_exponential(const Mat3& m, double t);

struct TimescaleReport {
  double nu = 0.0;
  double velocity = 0.0;
  double t_scale = 0.0;  ///< 2 nu / U^2
  std::optional<DimensionlessScaling> scaling;
  double dimensionless_delta = 0.0;  ///< 2 / Re, when a scaling is given
  double kappa_delta = 0.0;          ///< (L / U)(2 / Re), when a scaling is given
  std::string note;
};

TimescaleReport vorticity_timescale(double nu, double velocity);
TimescaleReport vorticity_timescale(const DimensionlessScaling& scaling);
/// 2 / Re.
double dimensionless_timescale(const DimensionlessScaling& scaling);

nlohmann::json to_json(const KernelBoundsReport& r);
nlohmann::json to_json(const MonteCarloReport& r);
nlohmann::json to_json(const TimescaleReport& r);

}  // namespace vxl
