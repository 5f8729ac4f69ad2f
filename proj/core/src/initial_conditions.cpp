#include "vxl/initial_conditions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "vxl/errors.hpp"
#include "vxl/spectral.hpp"

namespace vxl {

InitialKind parse_initial_kind(std::string_view name) {
  if (name == "taylor-green" || name == "taylor_green") return InitialKind::taylor_green;
  if (name == "abc") return InitialKind::abc;
  if (name == "random" || name == "random_isotropic") return InitialKind::random_isotropic;
  throw InvalidArgument("unknown initial condition: " + std::string(name));
}

std::string_view to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::taylor_green:
      return "taylor-green";
    case InitialKind::abc:
      return "abc";
    case InitialKind::random_isotropic:
      return "random";
  }
  return "unknown";
}

void InitialConditionParams::validate(InitialKind kind) const {
  if (band_limit < 0) throw InvalidArgument("band_limit must be nonnegative");
  if (kind == InitialKind::random_isotropic) {
    if (!(k0 > 0.0) || !std::isfinite(k0)) throw InvalidArgument("k0 must be positive");
    if (!(energy > 0.0) || !std::isfinite(energy)) throw InvalidArgument("energy must be positive");
  }
  if (kind == InitialKind::abc && !(std::isfinite(a) && std::isfinite(b) && std::isfinite(c))) {
    throw InvalidArgument("ABC coefficients must be finite");
  }
}

namespace {

VectorField random_isotropic(const GridPtr& grid, const InitialConditionParams& params, std::uint64_t seed) {
  const Grid& g = *grid;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<ScalarField, 3> noise;
  for (auto& c : noise) {
    RealBuffer v(g.physical_size());
    for (auto& x : v) x = normal(rng);
    c = ScalarField::from_values(grid, std::move(v)).to_spectral();
  }

  const int n = g.n(), h = g.half_n();
  const auto mask = g.dealias_mask();
  const int limit = params.band_limit;
  std::array<ComplexBuffer, 3> shaped;
  for (int c = 0; c < 3; ++c) shaped[c].assign(g.spectral_size(), Complex{});
  std::size_t idx = 0;
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < h; ++ix, ++idx) {
        const int mx = g.mode(Axis::x, ix), my = g.mode(Axis::y, iy), mz = g.mode(Axis::z, iz);
        const bool keep = limit > 0 ? (std::abs(mx) < limit && std::abs(my) < limit && std::abs(mz) < limit)
                                    : mask[idx] != 0;
        if (!keep || (mx == 0 && my == 0 && mz == 0)) continue;
        const double k = std::sqrt(double(mx * mx + my * my + mz * mz));
        const double spectrum = std::pow(k, 4) * std::exp(-2.0 * (k / params.k0) * (k / params.k0));
        const double amp = std::sqrt(spectrum / (4.0 * std::numbers::pi * k * k));
        for (int c = 0; c < 3; ++c) shaped[c][idx] = amp * noise[c].coefficients()[idx];
      }
    }
  }
  VectorField u(ScalarField::from_coefficients(grid, std::move(shaped[0])),
                ScalarField::from_coefficients(grid, std::move(shaped[1])),
                ScalarField::from_coefficients(grid, std::move(shaped[2])));
  u = leray_project(u);
  const double e = 0.5 * (spectral_mean_square(u[0]) + spectral_mean_square(u[1]) + spectral_mean_square(u[2]));
  if (!(e > 0.0)) throw InvalidArgument("band limit leaves no energetic modes");
  return u * std::sqrt(params.energy / e);
}

}  // namespace

FlowState initial_condition(InitialKind kind, const GridPtr& grid, const InitialConditionParams& params,
                            std::uint64_t seed, double nu) {
  if (!grid) throw InvalidArgument("initial condition needs a grid");
  params.validate(kind);
  const double k = grid->fundamental();
  VectorField u;
  switch (kind) {
    case InitialKind::taylor_green:
      u = VectorField::sample(grid, [k](double x, double y, double z) {
        return std::array<double, 3>{std::sin(k * x) * std::cos(k * y) * std::cos(k * z),
                                     -std::cos(k * x) * std::sin(k * y) * std::cos(k * z), 0.0};
      });
      break;
    case InitialKind::abc:
      u = VectorField::sample(grid, [&](double x, double y, double z) {
        x *= k;
        y *= k;
        z *= k;
        return std::array<double, 3>{params.a * std::sin(z) + params.c * std::cos(y),
                                     params.b * std::sin(x) + params.a * std::cos(z),
                                     params.c * std::sin(y) + params.b * std::cos(x)};
      });
      break;
    case InitialKind::random_isotropic:
      u = random_isotropic(grid, params, seed);
      break;
  }
  if (kind != InitialKind::random_isotropic && params.band_limit > 0) u = band_limit(u, params.band_limit);
  auto state = FlowState::dimensional(u, nu);
  state.validate();
  return state;
}

}  // namespace vxl
