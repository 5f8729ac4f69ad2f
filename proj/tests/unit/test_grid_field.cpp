#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vxl/errors.hpp"
#include "vxl/snapshot.hpp"
#include "vxl/spectral.hpp"

namespace vxl {
namespace {

TEST(Grid, RejectsOddAndSmallSizes) {
  EXPECT_THROW(Grid::create(7), InvalidArgument);
  EXPECT_THROW(Grid::create(6), InvalidArgument);
  EXPECT_THROW(Grid::create(16, 0.0), InvalidArgument);
  EXPECT_NO_THROW(Grid::create(12));
}

TEST(Grid, LayoutIsXFastest) {
  const auto g = Grid::create(8);
  EXPECT_EQ(g->physical_index(1, 0, 0), 1u);
  EXPECT_EQ(g->physical_index(0, 1, 0), 8u);
  EXPECT_EQ(g->physical_index(0, 0, 1), 64u);
  EXPECT_EQ(g->half_n(), 5);
  EXPECT_EQ(g->spectral_size(), 8u * 8u * 5u);
}

TEST(Grid, RefinedKeepsBox) {
  const auto g = Grid::create(16, 3.0);
  const auto r = g->refined(2);
  EXPECT_EQ(r->n(), 32);
  EXPECT_DOUBLE_EQ(r->box_length(), 3.0);
}

TEST(ScalarField, RoundTripRecoversValues) {
  const auto g = Grid::create(16);
  const auto f = ScalarField::sample(g, [](double x, double y, double z) {
    return std::sin(x) * std::cos(2 * y) + std::exp(std::sin(z));
  });
  const auto back = f.to_spectral().to_physical();
  EXPECT_LT(sup_norm(back - f), 1e-13);
}

TEST(ScalarField, ForwardIsNormalizedMean) {
  const auto g = Grid::create(8);
  const auto f = ScalarField::constant(g, 2.5);
  EXPECT_NEAR(f.to_spectral().coefficients()[0].real(), 2.5, 1e-15);
  EXPECT_NEAR(volume_mean(f), 2.5, 1e-15);
}

TEST(ScalarField, StrictTransformThrows) {
  const auto f = ScalarField::zeros(Grid::create(8));
  EXPECT_THROW(transform(f, Representation::physical), Error);
  EXPECT_NO_THROW(transform(f, Representation::spectral));
}

TEST(ScalarField, MismatchedGridsThrow) {
  const auto a = ScalarField::zeros(Grid::create(8));
  const auto b = ScalarField::zeros(Grid::create(16));
  EXPECT_THROW(a + b, GridMismatch);
}

TEST(Spectral, DerivativesOfTrigonometricFields) {
  const double L = 3.0;
  const double k = 2.0 * std::numbers::pi / L;
  const auto g = Grid::create(16, L);
  const auto f = ScalarField::sample(g, [&](double x, double y, double z) { return std::sin(2 * k * x) * std::cos(k * y + k * z); });
  const auto dfx = ScalarField::sample(g, [&](double x, double y, double z) { return 2 * k * std::cos(2 * k * x) * std::cos(k * y + k * z); });
  EXPECT_LT(sup_norm(derivative(f, Axis::x).to_physical() - dfx), 1e-12);
  const auto lap = laplacian(f).to_physical();
  EXPECT_LT(sup_norm(lap + f * (6 * k * k)), 1e-11);
}

TEST(Spectral, CurlOfGradientVanishes) {
  const auto g = Grid::create(16);
  const auto f = ScalarField::sample(g, [](double x, double y, double z) { return std::sin(x + y) * std::cos(3 * z); });
  EXPECT_LT(sup_norm(curl(gradient(f)).to_physical()), 1e-12);
}

TEST(Spectral, DivergenceOfCurlVanishes) {
  const auto u = test::random_state(16, 0, 5).u;
  EXPECT_LT(sup_norm(divergence(curl(u)).to_physical()), 1e-11);
}

TEST(Spectral, PoissonInvertsLaplacian) {
  const auto g = Grid::create(16);
  const auto f = ScalarField::sample(g, [](double x, double y, double z) { return std::cos(x) * std::sin(2 * y) + std::sin(z); });
  EXPECT_LT(sup_norm(solve_poisson(laplacian(f)).to_physical() - f), 1e-13);
}

TEST(Spectral, PoissonRejectsNonzeroMean) {
  EXPECT_THROW(solve_poisson(ScalarField::constant(Grid::create(8), 1.0)), NonzeroMean);
}

TEST(Spectral, DealiasKeepsTwoThirdsBand) {
  const auto g = Grid::create(24);
  const auto lo = ScalarField::sample(g, [](double x, double, double) { return std::cos(7 * x); });
  const auto hi = ScalarField::sample(g, [](double x, double, double) { return std::cos(8 * x); });
  EXPECT_LT(sup_norm(dealias(lo).to_physical() - lo), 1e-13);
  EXPECT_LT(sup_norm(dealias(hi).to_physical()), 1e-13);
}

TEST(Spectral, ResampleIsExactForBandLimitedData) {
  const auto g = Grid::create(16);
  auto trig = [](double x, double y, double z) { return std::sin(3 * x) * std::cos(y - 2 * z); };
  const auto f = ScalarField::sample(g, trig);
  const auto fine = resample(f, g->refined(2)).to_physical();
  EXPECT_LT(sup_norm(fine - ScalarField::sample(g->refined(2), trig)), 1e-13);
  EXPECT_LT(sup_norm(resample(fine, g).to_physical() - f), 1e-13);
}

TEST(Spectral, ParsevalMatchesPointMean) {
  const auto u = test::random_state(16, 0, 11).u;
  const auto x = u[0].to_physical();
  EXPECT_NEAR(spectral_mean_square(x), volume_mean(x * x), 1e-14);
}

TEST(Spectral, MaxModeAndBandLimit) {
  const auto g = Grid::create(16);
  const auto f = ScalarField::sample(g, [](double x, double y, double) { return std::sin(5 * x) + std::cos(2 * y); });
  EXPECT_EQ(max_mode(f), 5);
  EXPECT_EQ(max_mode(band_limit(f, 4)), 2);
}

TEST(Snapshot, RoundTripIsBitExact) {
  const auto u = test::random_state(8, 0, 2).u.to_physical();
  std::stringstream buf;
  write_snapshot(buf, make_snapshot(u, 0.25, 0.01));
  const auto s = read_snapshot(buf);
  EXPECT_EQ(s.time, 0.25);
  EXPECT_EQ(s.viscosity, 0.01);
  const auto v = s.as_vector().to_physical();
  for (int c = 0; c < 3; ++c) {
    const auto a = u[c].values(), b = v[c].values();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]);
  }
}

TEST(Snapshot, RejectsGarbage) {
  std::stringstream buf("not a snapshot at all");
  EXPECT_THROW(read_snapshot(buf), FormatError);
}

}  // namespace
}  // namespace vxl
