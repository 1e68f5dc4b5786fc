#include <cmath>

#include "doctest.h"
#include "dp_oracle.hpp"
#include "environments.hpp"

using namespace smoothrl;

// Slow: runs the oracle at twice the default resolution.
TEST_SUITE("oracle_convergence") {
  TEST_CASE("doubling the grids moves the estimate by less than 1e-2") {
    const auto [left, right] = reference_lqr_environments();
    for (const auto* cfg : {&left, &right}) {
      const DpOracleOptions base;
      DpOracleOptions fine = base;
      fine.state_points = 2 * base.state_points - 1;
      fine.action_points = 2 * base.action_points - 1;
      const double coarse_v = dp_oracle(*cfg, base), fine_v = dp_oracle(*cfg, fine);
      MESSAGE("default " << coarse_v << ", refined " << fine_v);
      CHECK(std::abs(coarse_v - fine_v) < 1e-2);
    }
  }
}
