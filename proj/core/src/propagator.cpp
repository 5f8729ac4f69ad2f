#include <cmath>
#include <numbers>

#include "vxl/errors.hpp"
#include "vxl/heatkernel.hpp"
#include "vxl/spectral.hpp"

namespace vxl {

namespace {

void require_traceless_symmetric(const Mat3& g) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::abs(g[i][j] - g[j][i]) > 1e-12) throw InvalidArgument("Gamma must be symmetric");
  if (std::abs(g[0][0] + g[1][1] + g[2][2]) > 1e-12) throw InvalidArgument("Gamma must be traceless");
}

VectorField apply_matrix(const Mat3& m, const VectorField& v) {
  const auto p = v.to_physical();
  return {p[0] * m[0][0] + p[1] * m[0][1] + p[2] * m[0][2], p[0] * m[1][0] + p[1] * m[1][1] + p[2] * m[1][2],
          p[0] * m[2][0] + p[1] * m[2][1] + p[2] * m[2][2]};
}

// Mean of each component over the periodic ball |xi - x| < radius, by FFT
// convolution with the ball indicator.
VectorField ball_mean(const VectorField& v, double radius) {
  const auto& grid = v.grid();
  const Grid& g = *grid;
  const int n = g.n();
  const double h = g.spacing(), box = g.box_length();
  RealBuffer indicator(g.physical_size(), 0.0);
  double count = 0.0;
  auto periodic = [&](int i) {
    const double d = h * i;
    return std::min(d, box - d);
  };
  for (int z = 0; z < n; ++z)
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        const double dx = periodic(x), dy = periodic(y), dz = periodic(z);
        if (dx * dx + dy * dy + dz * dz < radius * radius) {
          indicator[g.physical_index(x, y, z)] = 1.0;
          count += 1.0;
        }
      }
  const auto k = ScalarField::from_values(grid, std::move(indicator)).to_spectral();
  const auto kc = k.coefficients();
  const double scale = static_cast<double>(g.physical_size()) / count;
  std::array<ScalarField, 3> out;
  for (int c = 0; c < 3; ++c) {
    const auto s = v[c].to_spectral();
    const auto sc = s.coefficients();
    ComplexBuffer conv(sc.size());
    for (std::size_t i = 0; i < sc.size(); ++i) conv[i] = sc[i] * kc[i] * scale;
    out[static_cast<std::size_t>(c)] = ScalarField::from_coefficients(grid, std::move(conv)).to_physical();
  }
  return {out[0], out[1], out[2]};
}

}  // namespace

VectorField short_time_vorticity_step(const VectorField& theta, const Mat3& gamma, const KernelParams& params) {
  params.validate();
  require_traceless_symmetric(gamma);
  const auto th = theta.to_physical();
  const double m = memory_factor(params);
  const double ball_volume = 4.0 / 3.0 * std::numbers::pi * std::pow(params.delta, 3);
  auto local = (th + apply_matrix(gamma, th) * params.delta) * m;
  return local + ball_mean(th, params.delta) * (params.sigma * ball_volume);
}

VectorField exact_linear_vorticity_step(const VectorField& theta, const Mat3& gamma, const Vec3& drift,
                                        const KernelParams& params) {
  require_traceless_symmetric(gamma);
  if (!(params.sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (!(params.delta >= 0.0)) throw InvalidArgument("delta must be nonnegative");
  const auto s = theta.to_spectral();
  const Grid& g = *s.grid();
  const auto kx = g.derivative_wavenumbers(Axis::x);
  const auto ky = g.derivative_wavenumbers(Axis::y);
  const auto kz = g.derivative_wavenumbers(Axis::z);
  const auto k2 = g.laplacian_symbol();
  const double inv_re = 1.0 / params.reynolds();
  const int n = g.n(), h = g.half_n();
  ComplexBuffer factor(g.spectral_size());
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < h; ++ix, ++idx) {
        const double phase = -(kx[ix] * drift[0] + ky[iy] * drift[1] + kz[iz] * drift[2]) * params.delta;
        factor[idx] = std::exp(-k2[idx] * params.delta * inv_re) * Complex(std::cos(phase), std::sin(phase));
      }
  std::array<ScalarField, 3> out;
  for (int c = 0; c < 3; ++c) {
    const auto sc = s[c].coefficients();
    ComplexBuffer w(sc.size());
    for (std::size_t i = 0; i < sc.size(); ++i) w[i] = sc[i] * factor[i];
    out[static_cast<std::size_t>(c)] = ScalarField::from_coefficients(s.grid(), std::move(w));
  }
  return apply_matrix(symmetric_matrix_exponential(gamma, params.delta), VectorField(out[0], out[1], out[2]));
}

}  // namespace vxl
