#include <cmath>

#include <benchmark/benchmark.h>

#include "vxl/dynvars.hpp"
#include "vxl/evolution.hpp"
#include "vxl/initial_conditions.hpp"
#include "vxl/spectral.hpp"

namespace {

vxl::FlowState flow(int n) {
  return vxl::initial_condition(vxl::InitialKind::random_isotropic, vxl::Grid::create(n), {}, 7, 0.01);
}

void BM_FftRoundTrip(benchmark::State& st) {
  const auto grid = vxl::Grid::create(static_cast<int>(st.range(0)));
  const auto f = vxl::ScalarField::sample(grid, [](double x, double y, double z) { return std::sin(x + 2 * y) * std::cos(z); });
  for (auto _ : st) {
    auto back = f.to_spectral().to_physical();
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_FftRoundTrip)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_NsRhs(benchmark::State& st) {
  const auto s = flow(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto r = vxl::ns_rhs(s);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_NsRhs)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_StepperAdvance(benchmark::State& st) {
  auto s = flow(static_cast<int>(st.range(0)));
  vxl::Stepper stepper(s.u.grid(), s.viscosity(), 1e-3, 0.5);
  for (auto _ : st) stepper.advance(s);
}
BENCHMARK(BM_StepperAdvance)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_VelocityGradient(benchmark::State& st) {
  const auto s = flow(static_cast<int>(st.range(0)));
  for (auto _ : st) {
    auto a = vxl::velocity_gradient(s.u);
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_VelocityGradient)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
