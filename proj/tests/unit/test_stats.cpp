#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vxl/errors.hpp"
#include "vxl/stats.hpp"

namespace vxl {
namespace {

TEST(Diagnose, TaylorGreenValues) {
  const auto s = test::taylor_green(32, 0.01);
  const auto r = diagnose(s);
  EXPECT_NEAR(r.mean_u2, 0.25, 1e-13);
  EXPECT_NEAR(r.mean_enstrophy, 0.75, 1e-13);
  EXPECT_NEAR(r.mean_S2, 0.375, 1e-13);
  EXPECT_NEAR(r.mean_helicity, 0.0, 1e-14);
  EXPECT_NEAR(r.entropy_functional, r.mean_abs_omega + 0.25 / (std::sqrt(2.0) * 0.01), 1e-12);
  EXPECT_NEAR(r.d_mean_u2_dt, -2.0 * 0.01 * 0.75, 1e-14);
  ASSERT_EQ(r.mean_abs_omega_q.size(), 3u);
  EXPECT_NEAR(r.mean_abs_omega_q[1].second, 0.75, 1e-13);
}

TEST(Dissipation, ExactLawHoldsAndSingleFactorDoesNot) {
  for (const auto& s : {test::taylor_green(16, 0.02), test::random_state(16, 0, 5, 0.02)}) {
    const auto d = dissipation_check(diagnose(s));
    EXPECT_LT(std::abs(d.energy_exact), 1e-12);
    EXPECT_LT(std::abs(d.strain), 1e-12);
    EXPECT_NEAR(d.energy_printed, -1.0, 1e-12);
  }
}

TEST(Lq, SlackNonnegativeOnRandomField) {
  const auto s = test::random_state(16, 0, 9, 0.02);
  for (double q : {1.0, 1.5, 2.0, 3.0}) {
    const auto r = lq_inequality_check(s, q);
    EXPECT_TRUE(r.passed()) << "q=" << q << " slack=" << r.slack;
    EXPECT_GT(r.scale, 0.0);
  }
  EXPECT_THROW(lq_inequality_check(s, 0.5), InvalidArgument);
}

TEST(Lq, QuadraticCaseIsEnstrophyBalance) {
  const auto s = test::random_state(16, 0, 10, 0.02);
  const auto r = lq_inequality_check(s, 2.0);
  const auto d = diagnose(s);
  // d<|w|^2>/dt = -2 nu <|grad w|^2> + 2 <w.Sw>; the inequality drops a nonnegative term.
  EXPECT_NEAR(r.lhs, -2.0 * d.viscosity * d.mean_grad_omega2 + 2.0 * d.mean_omega_S_omega, 1e-10 * r.scale);
  EXPECT_GE(r.slack, 0.0);
}

TEST(Csv, RoundTripIsExact) {
  const auto a = diagnose(test::random_state(8, 0, 1));
  auto b = a;
  b.t = 0.1;
  std::stringstream buf;
  write_csv(buf, {a, b});
  const auto back = read_csv(buf);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].t, 0.1);
  EXPECT_EQ(back[0].entropy_functional, a.entropy_functional);
  EXPECT_EQ(back[0].d_mean_abs_omega_dt, a.d_mean_abs_omega_dt);
  ASSERT_EQ(back[0].lq.size(), a.lq.size());
  EXPECT_EQ(back[0].lq[2].slack, a.lq[2].slack);
  EXPECT_EQ(back[0].mean_abs_omega_q[0].second, a.mean_abs_omega_q[0].second);
}

TEST(Csv, RejectsMalformedInput) {
  std::stringstream buf("t,mean_u2\n0,abc\n");
  EXPECT_THROW(read_csv(buf), FormatError);
}

TEST(Entropy, DetectsIncrease) {
  const auto r0 = diagnose(test::taylor_green(8));
  std::vector<DiagnosticsRecord> series{r0, r0, r0};
  EXPECT_THROW(entropy_monotonicity_check({r0, r0}), InvalidArgument);
  EXPECT_EQ(entropy_monotonicity_check(series).violations, 0u);
  series[2].entropy_functional += 1e-3 * r0.entropy_functional;
  EXPECT_EQ(entropy_monotonicity_check(series).violations, 1u);
  EXPECT_FALSE(entropy_monotonicity_check(series).passed());
}

TEST(QRHistogram, BinsEveryPoint) {
  const auto u = test::random_state(16, 0, 3).u;
  const auto h = qr_invariants(u, 16);
  EXPECT_EQ(h.traces.total(), 16 * 16 * 16);
  EXPECT_DOUBLE_EQ(h.traces.mass(16 * 16 * 16), 1.0);
  EXPECT_EQ(h.traces.q_edges.size(), 17u);
  EXPECT_EQ(h.conventional.total(), h.traces.total());
  EXPECT_THROW(qr_invariants(u, 1), InvalidArgument);
  const auto j = to_json(h);
  EXPECT_TRUE(j.contains("alternate"));
}

TEST(QRHistogram, DegenerateFieldIsWidened) {
  const auto h = qr_invariants(VectorField::zeros(Grid::create(8)), 4);
  EXPECT_EQ(h.traces.total(), 512);
  EXPECT_LT(h.traces.q_edges.front(), h.traces.q_edges.back());
}

}  // namespace
}  // namespace vxl
