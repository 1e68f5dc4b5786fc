#pragma once

#include <cstddef>

#include "environments.hpp"

namespace smoothrl {

struct DpOracleOptions {
  std::size_t state_points = 81;   // per state coordinate, endpoints included
  std::size_t action_points = 21;  // per action coordinate
  /// Golden-section steps per action coordinate around the best grid action;
  /// 0 keeps the maximization on the grid.
  std::size_t refine_iterations = 24;
  std::size_t noise_nodes = 8;     // Gauss-Hermite nodes per noise coordinate
  std::size_t max_grid_cells = 4000000;
};

/// Estimate of V*_1(s_1) for a squashed LQR by backward value iteration on a
/// tensor state grid over [-1, 1]^d (d <= 2) with multilinear interpolation;
/// the transition-noise expectation uses a tensor Gauss-Hermite rule and
/// actions are maximized continuously inside [-1, 1]^d_A.
double dp_oracle(const SquashedLqrConfig& cfg, const DpOracleOptions& options = {});

}  // namespace smoothrl
