#pragma once

#include <cstdint>

#include "vxl/evolution.hpp"
#include "vxl/initial_conditions.hpp"

namespace vxl::test {

inline FlowState random_state(int n, int band_limit, std::uint64_t seed, double nu = 0.01) {
  InitialConditionParams p;
  p.k0 = 3.0;
  p.band_limit = band_limit;
  return initial_condition(InitialKind::random_isotropic, Grid::create(n), p, seed, nu);
}

inline FlowState taylor_green(int n, double nu = 0.01) {
  return initial_condition(InitialKind::taylor_green, Grid::create(n), {}, 0, nu);
}

}  // namespace vxl::test
