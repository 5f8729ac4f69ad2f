#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vxl/dynvars.hpp"
#include "vxl/errors.hpp"
#include "vxl/spectral.hpp"

namespace vxl {
namespace {

TEST(Eigenvalues, DiagonalAndKnownMatrices) {
  auto e = symmetric_eigenvalues({3, 0, 0, 1, 0, 2});
  EXPECT_DOUBLE_EQ(e[0], 3.0);
  EXPECT_NEAR(e[1], 2.0, 1e-14);
  EXPECT_NEAR(e[2], 1.0, 1e-14);
  e = symmetric_eigenvalues({2, 1, 0, 2, 0, 5});
  EXPECT_NEAR(e[0], 5.0, 1e-14);
  EXPECT_NEAR(e[1], 3.0, 1e-14);
  EXPECT_NEAR(e[2], 1.0, 1e-14);
  e = symmetric_eigenvalues({1, 0, 0, 1, 0, 1});
  for (double v : e) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Eigenvalues, InvariantsMatchTraces) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 200; ++trial) {
    std::array<double, 6> s{};
    for (auto& v : s) v = g(rng);
    const auto e = symmetric_eigenvalues(s);
    EXPECT_GE(e[0], e[1]);
    EXPECT_GE(e[1], e[2]);
    const double tr = s[0] + s[3] + s[5];
    const double tr2 = s[0] * s[0] + s[3] * s[3] + s[5] * s[5] + 2 * (s[1] * s[1] + s[2] * s[2] + s[4] * s[4]);
    const double det = s[0] * (s[3] * s[5] - s[4] * s[4]) - s[1] * (s[1] * s[5] - s[4] * s[2]) +
                       s[2] * (s[1] * s[4] - s[3] * s[2]);
    const double scale = 1.0 + tr2;
    EXPECT_NEAR(e[0] + e[1] + e[2], tr, 1e-12 * scale);
    EXPECT_NEAR(e[0] * e[0] + e[1] * e[1] + e[2] * e[2], tr2, 1e-12 * scale);
    EXPECT_NEAR(e[0] * e[1] * e[2], det, 1e-11 * scale * std::sqrt(scale));
  }
}

TEST(VelocityGradient, RejectsCompressibleField) {
  const auto g = Grid::create(16);
  const auto u = VectorField::sample(g, [](double x, double, double) { return std::array<double, 3>{std::sin(x), 0, 0}; });
  EXPECT_THROW(velocity_gradient(u), NonSolenoidal);
}

TEST(Decompose, ReassemblesGradient) {
  const auto u = test::random_state(16, 0, 8).u;
  const auto a = velocity_gradient(u);
  const auto sv = decompose(a);
  const auto& w = sv.vorticity;
  EXPECT_LT(sup_norm((sv.strain - sv.strain.transpose())), 1e-14);
  EXPECT_LT(sup_norm(trace(sv.strain)), 1e-12);
  // A_12 = S_12 - w_3 / 2, A_13 = S_13 + w_2 / 2, A_23 = S_23 - w_1 / 2
  EXPECT_LT(sup_norm(a(0, 1) - sv.strain(0, 1) + w[2] * 0.5), 1e-13);
  EXPECT_LT(sup_norm(a(0, 2) - sv.strain(0, 2) - w[1] * 0.5), 1e-13);
  EXPECT_LT(sup_norm(a(1, 2) - sv.strain(1, 2) + w[0] * 0.5), 1e-13);
  EXPECT_LT(sup_norm(w - curl(u).to_physical()), 1e-12);
}

TEST(Invariants, TaylorGreenMeans) {
  const auto inv = invariants(test::taylor_green(32).u);
  EXPECT_NEAR(volume_mean(inv.enstrophy), 0.75, 1e-13);
  EXPECT_NEAR(volume_mean(inv.trS2), 0.375, 1e-13);
  EXPECT_NEAR(volume_mean(inv.trA2), 0.0, 1e-13);
}

TEST(Invariants, EigenvalueSpreadEqualsTrS2ForTracelessStrain) {
  const auto u = test::random_state(16, 0, 9).u;
  const auto sv = decompose(velocity_gradient(u));
  const auto eigs = strain_eigenvalues(sv.strain);
  const auto spread = variance_P(eigs);
  const auto tr2 = contract(sv.strain, sv.strain);
  EXPECT_LT(sup_norm(spread.P - tr2), 1e-11 * sup_norm(tr2));
  EXPECT_LT(sup_norm(spread.trS2_over_three * 3.0 - tr2), 1e-11 * sup_norm(tr2));
  EXPECT_LT(sup_norm(eigs.a + eigs.b + eigs.c), 1e-11);
}

TEST(Helicity, AbcIsBeltrami) {
  const auto s = initial_condition(InitialKind::abc, Grid::create(16), {}, 0, 0.1);
  EXPECT_NEAR(mean_helicity(s.u), 3.0, 1e-13);
  EXPECT_NEAR(mean_helicity(test::taylor_green(16).u), 0.0, 1e-14);
}

}  // namespace
}  // namespace vxl
