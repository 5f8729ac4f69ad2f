#include "vxl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "vxl/errors.hpp"

namespace vxl {

namespace {

constexpr Complex kI{0.0, 1.0};

// Calls fn(index, ix, iy, iz) for every spectral index in storage order.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const int n = g.n();
  const int h = g.half_n();
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz)
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < h; ++ix, ++idx) fn(idx, ix, iy, iz);
}

double axis_k(const Grid& g, Axis a, int ix, int iy, int iz) {
  const auto k = g.derivative_wavenumbers(a);
  switch (a) {
    case Axis::x:
      return k[static_cast<std::size_t>(ix)];
    case Axis::y:
      return k[static_cast<std::size_t>(iy)];
    case Axis::z:
      return k[static_cast<std::size_t>(iz)];
  }
  return 0.0;
}

}  // namespace

ScalarField derivative(const ScalarField& f, Axis axis) {
  const auto s = f.to_spectral();
  const Grid& g = s.grid_ref();
  auto in = s.coefficients();
  ComplexBuffer out(in.size());
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    out[idx] = kI * axis_k(g, axis, ix, iy, iz) * in[idx];
  });
  return ScalarField::from_coefficients(f.grid(), std::move(out));
}

VectorField gradient(const ScalarField& f) {
  const auto s = f.to_spectral();
  return {derivative(s, Axis::x), derivative(s, Axis::y), derivative(s, Axis::z)};
}

ScalarField divergence(const VectorField& v) {
  const auto s = v.to_spectral();
  const Grid& g = *s.grid();
  auto cx = s[0].coefficients();
  auto cy = s[1].coefficients();
  auto cz = s[2].coefficients();
  const auto kx = g.derivative_wavenumbers(Axis::x);
  const auto ky = g.derivative_wavenumbers(Axis::y);
  const auto kz = g.derivative_wavenumbers(Axis::z);
  ComplexBuffer out(g.spectral_size());
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    out[idx] = kI * (kx[ix] * cx[idx] + ky[iy] * cy[idx] + kz[iz] * cz[idx]);
  });
  return ScalarField::from_coefficients(s.grid(), std::move(out));
}

VectorField curl(const VectorField& v) {
  const auto s = v.to_spectral();
  const Grid& g = *s.grid();
  auto ux = s[0].coefficients();
  auto uy = s[1].coefficients();
  auto uz = s[2].coefficients();
  const auto kx = g.derivative_wavenumbers(Axis::x);
  const auto ky = g.derivative_wavenumbers(Axis::y);
  const auto kz = g.derivative_wavenumbers(Axis::z);
  ComplexBuffer wx(g.spectral_size()), wy(g.spectral_size()), wz(g.spectral_size());
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    wx[idx] = kI * (ky[iy] * uz[idx] - kz[iz] * uy[idx]);
    wy[idx] = kI * (kz[iz] * ux[idx] - kx[ix] * uz[idx]);
    wz[idx] = kI * (kx[ix] * uy[idx] - ky[iy] * ux[idx]);
  });
  return {ScalarField::from_coefficients(s.grid(), std::move(wx)),
          ScalarField::from_coefficients(s.grid(), std::move(wy)),
          ScalarField::from_coefficients(s.grid(), std::move(wz))};
}

ScalarField laplacian(const ScalarField& f) {
  const auto s = f.to_spectral();
  const auto k2 = s.grid_ref().laplacian_symbol();
  auto in = s.coefficients();
  ComplexBuffer out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = -k2[i] * in[i];
  return ScalarField::from_coefficients(f.grid(), std::move(out));
}

VectorField laplacian(const VectorField& v) { return {laplacian(v[0]), laplacian(v[1]), laplacian(v[2])}; }

TensorField3 gradient_tensor(const VectorField& v) {
  const auto s = v.to_spectral();
  std::array<ScalarField, 9> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[static_cast<std::size_t>(3 * i + j)] = derivative(s[i], static_cast<Axis>(j));
  return TensorField3(std::move(c), false);
}

TensorField3 hessian(const ScalarField& f) {
  const auto s = f.to_spectral();
  const auto dx = derivative(s, Axis::x);
  const auto dy = derivative(s, Axis::y);
  const auto dz = derivative(s, Axis::z);
  return TensorField3::symmetric_from({derivative(dx, Axis::x), derivative(dx, Axis::y), derivative(dx, Axis::z),
                                       derivative(dy, Axis::y), derivative(dy, Axis::z), derivative(dz, Axis::z)});
}

ScalarField advect(const VectorField& v, const ScalarField& f) {
  const auto g = gradient(f);
  return v[0] * g[0] + v[1] * g[1] + v[2] * g[2];
}

VectorField advect(const VectorField& v, const VectorField& w) {
  const auto vp = v.to_physical();
  return {advect(vp, w[0]), advect(vp, w[1]), advect(vp, w[2])};
}

ScalarField solve_poisson(const ScalarField& rhs) {
  const auto s = rhs.to_spectral();
  auto in = s.coefficients();
  double scale = 0.0;
  for (const auto& c : in) scale = std::max(scale, std::abs(c));
  const double mean = in[0].real();
  if (std::abs(in[0]) > 1e-12 * scale) {
    throw NonzeroMean("Poisson right-hand side has nonzero mean " + std::to_string(mean), mean);
  }
  const auto k2 = s.grid_ref().laplacian_symbol();
  ComplexBuffer out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = k2[i] > 0.0 ? -in[i] / k2[i] : Complex{};
  return ScalarField::from_coefficients(rhs.grid(), std::move(out));
}

double volume_mean(const ScalarField& f) {
  if (f.is_spectral()) return f.coefficients()[0].real();
  double s = 0.0;
  for (double v : f.values()) s += v;
  return s / static_cast<double>(f.values().size());
}

ScalarField dealias(const ScalarField& f) {
  const auto s = f.to_spectral();
  const auto mask = s.grid_ref().dealias_mask();
  auto in = s.coefficients();
  ComplexBuffer out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = mask[i] ? in[i] : Complex{};
  return ScalarField::from_coefficients(f.grid(), std::move(out));
}

VectorField dealias(const VectorField& v) { return {dealias(v[0]), dealias(v[1]), dealias(v[2])}; }

ScalarField band_limit(const ScalarField& f, int limit) {
  const auto s = f.to_spectral();
  const Grid& g = s.grid_ref();
  auto in = s.coefficients();
  ComplexBuffer out(in.size());
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    const bool keep = std::abs(g.mode(Axis::x, ix)) < limit && std::abs(g.mode(Axis::y, iy)) < limit &&
                      std::abs(g.mode(Axis::z, iz)) < limit;
    out[idx] = keep ? in[idx] : Complex{};
  });
  return ScalarField::from_coefficients(f.grid(), std::move(out));
}

VectorField band_limit(const VectorField& v, int limit) {
  return {band_limit(v[0], limit), band_limit(v[1], limit), band_limit(v[2], limit)};
}

int max_mode(const ScalarField& f, double threshold) {
  const auto s = f.to_spectral();
  const Grid& g = s.grid_ref();
  auto c = s.coefficients();
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  int m = 0;
  for_each_mode(g, [&](std::size_t idx, int ix, int iy, int iz) {
    if (std::abs(c[idx]) > threshold * scale) {
      m = std::max({m, std::abs(g.mode(Axis::x, ix)), std::abs(g.mode(Axis::y, iy)), std::abs(g.mode(Axis::z, iz))});
    }
  });
  return m;
}

int max_mode(const VectorField& v, double threshold) {
  return std::max({max_mode(v[0], threshold), max_mode(v[1], threshold), max_mode(v[2], threshold)});
}

ScalarField resample(const ScalarField& f, const GridPtr& target) {
  const auto s = f.to_spectral();
  const Grid& src = s.grid_ref();
  if (src.box_length() != target->box_length()) throw GridMismatch("resample: box lengths differ");
  if (src.same_as(*target)) return s;
  const int limit = std::min(src.n(), target->n()) / 2;  // keep |mode| < limit
  auto in = s.coefficients();
  ComplexBuffer out(target->spectral_size(), Complex{});
  auto src_index = [&](int m) { return m >= 0 ? m : m + src.n(); };
  auto dst_index = [&](int m) { return m >= 0 ? m : m + target->n(); };
  for (int mz = -limit + 1; mz < limit; ++mz) {
    for (int my = -limit + 1; my < limit; ++my) {
      for (int mx = 0; mx < limit; ++mx) {
        out[target->spectral_index(mx, dst_index(my), dst_index(mz))] =
            in[src.spectral_index(mx, src_index(my), src_index(mz))];
      }
    }
  }
  return ScalarField::from_coefficients(target, std::move(out));
}

VectorField resample(const VectorField& v, const GridPtr& target) {
  return {resample(v[0], target), resample(v[1], target), resample(v[2], target)};
}

double spectral_mean_square(const ScalarField& f) {
  const auto s = f.to_spectral();
  const Grid& g = s.grid_ref();
  auto c = s.coefficients();
  double sum = 0.0;
  for_each_mode(g, [&](std::size_t idx, int ix, int, int) { sum += g.hermitian_weight(ix) * std::norm(c[idx]); });
  return sum;
}

}  // namespace vxl
