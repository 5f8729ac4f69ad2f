#include "vxl/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vxl/errors.hpp"

namespace vxl {

KernelParams KernelParams::from_reynolds(double re, double delta) {
  if (!(re > 0.0)) throw InvalidArgument("Reynolds number must be positive");
  KernelParams p{std::sqrt(re / 2.0), delta};
  p.validate();
  return p;
}

void KernelParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be positive");
}

double phi(double a) { return 0.5 * std::erfc(-a / std::numbers::sqrt2); }
double psi(double a) { return 0.5 * std::erfc(a / std::numbers::sqrt2); }

double p_beta(double x, double t, double y, double beta) {
  if (!(t > 0.0)) throw InvalidArgument("p_beta requires t > 0");
  const double r = std::abs(x - y);
  const double st = std::sqrt(t);
  const double a = (r - beta * t) / st;
  return std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi * t) + beta * psi(a);
}

double p_beta_integral(double x, double t, double y, double beta) {
  if (!(t > 0.0)) throw InvalidArgument("p_beta requires t > 0");
  using boost::math::quadrature::gauss_kronrod;
  const double st = std::sqrt(t);
  const double lo = std::abs(x - y) / st;
  const double b = beta * st;
  const double hi = std::max(lo, b) + 40.0;
  auto f = [b](double z) { return z * std::exp(-0.5 * (z - b) * (z - b)); };
  double sum = 0.0;
  if (b > lo) {
    sum += gauss_kronrod<double, 61>::integrate(f, lo, b, 20, 1e-15);
    sum += gauss_kronrod<double, 61>::integrate(f, b, hi, 20, 1e-15);
  } else {
    sum += gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-15);
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * t);
}

double gamma_pm(const Vec3& xi, const Vec3& x, double t, double sigma, int sign) {
  if (!(t > 0.0)) throw InvalidArgument("gamma_pm requires t > 0");
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  double q = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = sigma * (x[i] - xi[i]) - sign * sigma * t;
    q += d * d;
  }
  return sigma * sigma * sigma * std::pow(2.0 * std::numbers::pi * t, -1.5) * std::exp(-q / (2.0 * t));
}

double constant_drift_kernel(const Vec3& xi, const Vec3& x, const KernelParams& params, const Vec3& drift) {
  const double s = params.sigma, d = params.delta;
  double q = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double e = x[i] - xi[i] - drift[i] * d;
    q += e * e;
  }
  return s * s * s * std::pow(2.0 * std::numbers::pi * d, -1.5) * std::exp(-s * s * q / (2.0 * d));
}

double kernel_product_bound(const Vec3& xi, const Vec3& x, const KernelParams& params, double beta) {
  const double s = params.sigma;
  double v = s * s * s;
  for (int i = 0; i < 3; ++i) v *= p_beta(s * xi[i], params.delta, s * x[i], beta);
  return v;
}

KernelBoundsReport kernel_bounds_check(const KernelParams& params, const Vec3& drift,
                                       const KernelBoundsOptions& options) {
  params.validate();
  for (double v : drift) {
    if (!(std::abs(v) <= 1.0)) throw InvalidArgument("drift components must satisfy |phi_i| <= 1");
  }
  if (options.points_per_axis < 2 || options.base_points_per_axis < 1) {
    throw InvalidArgument("lattice needs at least 2 offsets and 1 base point per axis");
  }
  KernelBoundsReport rep;
  rep.sigma = params.sigma;
  rep.delta = params.delta;
  rep.drift = drift;
  rep.min_slack_lower = rep.min_slack_upper = std::numeric_limits<double>::infinity();
  rep.reversed_order_holds = true;

  const int m = options.points_per_axis, nb = options.base_points_per_axis;
  const double reach = params.delta + options.width * std::sqrt(params.delta) / params.sigma;
  auto offset = [&](int j) { return -reach + 2.0 * reach * j / (m - 1); };
  auto base = [&](int j) { return nb == 1 ? 0.0 : -1.0 + 2.0 * j / (nb - 1); };

  for (int b0 = 0; b0 < nb; ++b0)
    for (int b1 = 0; b1 < nb; ++b1)
      for (int b2 = 0; b2 < nb; ++b2) {
        const Vec3 xi{base(b0), base(b1), base(b2)};
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
              const Vec3 x{xi[0] + offset(i), xi[1] + offset(j), xi[2] + offset(k)};
              const double g = constant_drift_kernel(xi, x, params, drift);
              const double lower = kernel_product_bound(xi, x, params, -params.sigma);
              const double upper = kernel_product_bound(xi, x, params, params.sigma);
              const double scale = std::max(upper, 1e-300);
              rep.min_slack_lower = std::min(rep.min_slack_lower, (g - lower) / scale);
              rep.min_slack_upper = std::min(rep.min_slack_upper, (upper - g) / scale);
              if (upper > g * (1.0 + 1e-12) || g > lower * (1.0 + 1e-12)) rep.reversed_order_holds = false;
              ++rep.points;
            }
      }
  return rep;
}

double f_pm(double sigma, double xi, double delta, double x, int sign) {
  if (!(delta > 0.0)) throw InvalidArgument("f_pm requires delta > 0");
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be +1 or -1");
  return sigma * p_beta(sigma * xi, delta, sigma * x, sign * sigma);
}

double f_pm_psi_factor(double sigma, double r, double delta, int sign) {
  if (!(delta > 0.0)) throw InvalidArgument("f_pm requires delta > 0");
  return psi(sigma * (r - sign * delta) / std::sqrt(delta));
}

double f_pm_psi_term(double sigma, double r, double delta, int sign) {
  return sign * sigma * sigma * f_pm_psi_factor(sigma, r, delta, sign);
}

double memory_factor(const KernelParams& params) {
  return std::exp(-1.5 * params.sigma * params.sigma * params.delta);
}

Mat3 symmetric_matrix_exponential(const Mat3& m, double t) {
  Eigen::Matrix3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = 0.5 * (m[i][j] + m[j][i]);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a);
  const Eigen::Vector3d ev = (es.eigenvalues() * t).array().exp();
  const Eigen::Matrix3d e = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = e(i, j);
  return out;
}

TimescaleReport vorticity_timescale(double nu, double velocity) {
  if (!(nu > 0.0) || !(velocity > 0.0)) throw InvalidArgument("nu and U must be positive");
  TimescaleReport r;
  r.nu = nu;
  r.velocity = velocity;
  r.t_scale = 2.0 * nu / (velocity * velocity);
  r.note = "2 nu / U^2 does not depend on the length scale L";
  return r;
}

TimescaleReport vorticity_timescale(const DimensionlessScaling& scaling) {
  scaling.validate();
  auto r = vorticity_timescale(scaling.viscosity, scaling.velocity);
  r.scaling = scaling;
  r.dimensionless_delta = dimensionless_timescale(scaling);
  r.kappa_delta = scaling.kappa() * r.dimensionless_delta;
  return r;
}

double dimensionless_timescale(const DimensionlessScaling& scaling) {
  scaling.validate();
  return 2.0 / scaling.reynolds();
}

nlohmann::json to_json(const KernelBoundsReport& r) {
  return {{"sigma", r.sigma},
          {"delta", r.delta},
          {"drift", r.drift},
          {"points", r.points},
          {"min_slack_lower", r.min_slack_lower},
          {"min_slack_upper", r.min_slack_upper},
          {"tolerance", r.tolerance},
          {"reversed_order_holds", r.reversed_order_holds},
          {"passed", r.passed()}};
}

nlohmann::json to_json(const MonteCarloReport& r) {
  nlohmann::json j{{"samples", r.samples},
                   {"steps", r.steps},
                   {"cells", r.cells},
                   {"violating_cells", r.violating_cells},
                   {"violation_fraction", r.violation_fraction},
                   {"sample_mean", r.sample_mean},
                   {"box_center", r.box_center},
                   {"cell_width", r.cell_width},
                   {"passed", r.passed()}};
  if (r.chi_square) {
    j["chi_square"] = *r.chi_square;
    j["degrees_of_freedom"] = *r.degrees_of_freedom;
    j["p_value"] = *r.p_value;
  }
  return j;
}

nlohmann::json to_json(const TimescaleReport& r) {
  nlohmann::json j{{"nu", r.nu}, {"U", r.velocity}, {"t_scale", r.t_scale}, {"note", r.note}};
  if (r.scaling) {
    j["L"] = r.scaling->length;
    j["Re"] = r.scaling->reynolds();
    j["kappa"] = r.scaling->kappa();
    j["dimensionless_delta"] = r.dimensionless_delta;
    j["kappa_delta"] = r.kappa_delta;
  }
  return j;
}

}  // namespace vxl
