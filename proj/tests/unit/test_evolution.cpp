#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vxl/dynvars.hpp"
#include "vxl/errors.hpp"
#include "vxl/evolution.hpp"
#include "vxl/spectral.hpp"

namespace vxl {
namespace {

double max_difference(const VectorField& a, const VectorField& b) { return sup_norm((a - b).to_physical()); }

TEST(Leray, ProjectsOntoSolenoidalFields) {
  const auto g = Grid::create(16);
  const auto v = VectorField::sample(g, [](double x, double y, double z) {
    return std::array<double, 3>{std::sin(x) * std::cos(y), std::sin(y + z), std::cos(2 * x - z)};
  });
  const auto p = leray_project(v);
  EXPECT_LT(sup_norm(divergence(p).to_physical()), 1e-13);
  EXPECT_LT(max_difference(leray_project(p), p), 1e-14);
  const auto grad = gradient(ScalarField::sample(g, [](double x, double y, double z) { return std::sin(x + y - z); }));
  EXPECT_LT(sup_norm(leray_project(grad).to_physical()), 1e-14);
}

TEST(Pressure, SolvesPoissonEquation) {
  const auto u = test::random_state(16, 0, 3).u;
  const auto p = pressure_from_velocity(u);
  const auto lhs = laplacian(p).to_physical();
  const auto rhs = (-divergence(advect(u, u))).to_physical();
  EXPECT_LT(sup_norm(lhs - rhs), 1e-11 * sup_norm(rhs));
  EXPECT_NEAR(volume_mean(p.to_physical()), 0.0, 1e-15);
}

TEST(NsRhs, IsSolenoidal) {
  const auto s = test::random_state(16, 0, 4);
  EXPECT_LT(sup_norm(divergence(ns_rhs(s)).to_physical()), 1e-12);
}

TEST(Stepper, StokesModeDecaysExactly) {
  const double nu = 0.1, dt = 0.01;
  const auto g = Grid::create(16);
  auto shear = [&](double t) {
    return VectorField::sample(g, [&](double, double y, double) {
      return std::array<double, 3>{std::exp(-nu * t) * std::sin(y), 0.0, 0.0};
    });
  };
  auto s = FlowState::dimensional(shear(0.0).to_spectral(), nu);
  Stepper stepper(g, nu, dt);
  for (int i = 0; i < 100; ++i) stepper.advance(s);
  EXPECT_NEAR(s.t, 1.0, 1e-12);
  EXPECT_LT(max_difference(s.u, shear(1.0)), 1e-12);
}

TEST(Stepper, ConvergesAtFourthOrder) {
  const double t_end = 0.8;
  auto run = [&](double dt) {
    auto s = test::taylor_green(16, 0.05);
    Stepper stepper(s.u.grid(), s.viscosity(), dt);
    const int steps = static_cast<int>(std::lround(t_end / dt));
    for (int i = 0; i < steps; ++i) stepper.advance(s);
    return s.u;
  };
  const auto a = run(0.1), b = run(0.05), c = run(0.025);
  const double order = std::log2(max_difference(a, b) / max_difference(b, c));
  EXPECT_GE(order, 3.9);
}

TEST(Stepper, KeepsVelocitySolenoidal) {
  auto s = test::random_state(16, 0, 6);
  Stepper stepper(s.u.grid(), s.viscosity(), 5e-3);
  for (int i = 0; i < 200; ++i) stepper.advance(s);
  EXPECT_LT(max_divergence(s.u), 1e-11);
}

TEST(Stepper, CflViolationLeavesStateUntouched) {
  auto s = test::taylor_green(16);
  const auto before = s.u;
  Stepper stepper(s.u.grid(), s.viscosity(), 1.0);
  EXPECT_THROW(stepper.advance(s), CflViolation);
  EXPECT_EQ(s.t, 0.0);
  EXPECT_EQ(max_difference(s.u, before), 0.0);
  EXPECT_GT(cfl_bound(s.u), 0.0);
  EXPECT_TRUE(std::isinf(cfl_bound(VectorField::zeros(s.u.grid()))));
}

TEST(Stepper, StepMatchesStepper) {
  const auto s = test::random_state(16, 0, 7);
  SolverConfig c{1e-3, 1e-3, 1e-3, 0.5};
  const auto a = step(s, c);
  auto b = s;
  Stepper(s.u.grid(), s.viscosity(), 1e-3).advance(b);
  EXPECT_EQ(max_difference(a.u, b.u), 0.0);
}

TEST(SolverConfig, RequiresIntegerMultiples) {
  SolverConfig c{1e-3, 1.0, 0.1, 0.5};
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.steps_per_output(), 100);
  EXPECT_EQ(c.output_count(), 10);
  c.output_interval = 0.10005;
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = SolverConfig{-1e-3, 1.0, 0.1, 0.5};
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(FlowState, ViscosityModes) {
  const auto u = test::taylor_green(8).u;
  EXPECT_DOUBLE_EQ(FlowState::dimensional(u, 0.02).viscosity(), 0.02);
  EXPECT_DOUBLE_EQ(FlowState::dimensionless(u, 50.0).viscosity(), 0.02);
  EXPECT_THROW(FlowState::dimensional(u, 0.0).validate(), InvalidArgument);
}

TEST(EvolutionResidual, ExactFormsVanishOnBandLimitedState) {
  const auto s = test::random_state(16, 4, 21);
  for (auto which : kAllEvolutionChecks) {
    for (const auto& r : evolution_residual(s, which)) {
      if (r.expected_exact) {
        EXPECT_TRUE(r.passed()) << r.name << " " << r.relative;
      }
    }
  }
}

TEST(EvolutionResidual, ReportsBothTrS3Readings) {
  const auto reports = evolution_residual(test::random_state(16, 4, 22), EvolutionCheck::trS3);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_EQ(reports[0].name, "trS3[(trS2)^2]");
  EXPECT_EQ(reports[1].name, "trS3[trS4]");
  EXPECT_TRUE(reports[1].expected_exact);
  EXPECT_FALSE(reports[0].expected_exact);
}

TEST(EvolutionResidual, ParsesCheckNames) {
  for (auto which : kAllEvolutionChecks) EXPECT_EQ(parse_evolution_check(to_string(which)), which);
  EXPECT_THROW(parse_evolution_check("bogus"), InvalidArgument);
}

TEST(Scaling, RoundTripAndReynolds) {
  const DimensionlessScaling sc{2.0, 0.5, 0.01};
  EXPECT_DOUBLE_EQ(sc.reynolds(), 100.0);
  EXPECT_DOUBLE_EQ(sc.kappa(), 4.0);
  const auto s = FlowState::dimensional(test::taylor_green(8).u, 0.01, 0.4);
  const auto d = nondimensionalize(s, sc);
  EXPECT_EQ(d.mode, ViscosityMode::dimensionless);
  EXPECT_DOUBLE_EQ(d.nu_or_re, 100.0);
  EXPECT_DOUBLE_EQ(d.t, 0.1);
  EXPECT_NEAR(d.u.grid()->box_length(), std::numbers::pi, 1e-15);
  EXPECT_NEAR(sup_norm(d.u.to_physical()), 2.0, 1e-14);
  const auto back = redimensionalize(d, sc);
  EXPECT_DOUBLE_EQ(back.viscosity(), 0.01);
  EXPECT_NEAR(back.t, 0.4, 1e-15);
  EXPECT_LT(max_difference(back.u, s.u), 1e-15);
  EXPECT_THROW(nondimensionalize(d, sc), InvalidArgument);
}

}  // namespace
}  // namespace vxl
