#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "environments.hpp"
#include "rng.hpp"
#include "stage_dataset.hpp"
#include "state_action_features.hpp"

namespace smoothrl {

inline constexpr std::size_t kEleanorMaxFeatures = 64;
inline constexpr std::size_t kEleanorMaxHorizon = 10;

/// values[h] = sum_{tau=1}^{H-1-h} base^tau for 0-based stage h; the last
/// stage gets 0.
struct RadiusSchedule {
  double base = 2.0;
  std::size_t horizon = 0;
  std::vector<double> values;
};

RadiusSchedule confidence_radii(std::size_t horizon, double base);

/// Per-stage bound on ||theta_h||_2 implied by a schedule:
/// sqrt(volume * length) * (values[h] + 1) / feature_scale. The +1 is the
/// reward's share of the recursion B(h) >= c (B(h+1) + 1), so the last
/// stage keeps room for the reward.
std::vector<double> norm_caps_from_schedule(const RadiusSchedule& schedule, std::size_t feature_length,
                                            double feature_scale, double domain_volume);

struct EleanorOptions {
  double lambda = 1.0;
  std::vector<double> ridge_radius;
  std::vector<double> norm_caps;
  std::size_t budget = 2000;
  double slack = 1e-3;
  /// Local refinement restarts once its step falls below this.
  double min_step = 1e-4;
};

struct EleanorPlan {
  std::vector<Vector> thetas;
  double optimistic_value = 0.0;
  double feasibility_residual = 0.0;
  bool feasible = true;
  std::size_t evaluations = 0;
};

/// Searches per-stage parameters maximizing max_b theta_1' phi(s_1, b)
/// subject to ||theta_h|| <= cap_h and theta_h lying in the ridge ellipsoid
/// (radius ridge_radius[h]) around the least-squares fit whose targets are
/// r + max_b theta_{h+1}' phi(s', b).
///
/// The ellipsoids are parametrized as theta_h = center_h + radius_h L_h^{-T} u_h
/// with ||u_h|| <= 1 (L_h the Cholesky factor of the stage Gram matrix). The
/// search is random restarts plus coordinate refinement over u, each
/// candidate also tried with u_1 at its closed-form best given the later
/// stages. Every candidate costs one unit of `budget`; the iterate sequence
/// does not depend on the budget, so the result is monotone in it. A budget
/// of 0 returns the chain of ridge centers.
///
/// `initial_features` has one row per candidate action at s_1.
EleanorPlan optimistic_plan(std::span<const StageData> stages, const Eigen::Ref<const RowMatrix>& initial_features,
                            const EleanorOptions& options, CounterRng& rng);

/// Largest violation of the cap and ellipsoid constraints for given thetas.
double plan_residual(std::span<const StageData> stages, const std::vector<Vector>& thetas,
                     const EleanorOptions& options);

/// Grid index maximizing theta_h' phi(s, b); lowest index on ties.
std::size_t act(const EleanorPlan& plan, std::size_t stage, const Vector& state, const Matrix& grid,
                const StateActionFeatures& features);

}  // namespace smoothrl
