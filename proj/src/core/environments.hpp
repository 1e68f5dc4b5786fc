#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace smoothrl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct StepRecord {
  Vector state;
  Vector action;
  double reward = 0.0;
};

struct Transcript {
  std::size_t episode_index = 0;
  std::vector<StepRecord> steps;
  Vector final_state;

  double total_return() const;
};

struct StepOutcome {
  Vector next_state;
  double reward = 0.0;
};

/// Episodic simulator. Implementations are immutable; all randomness comes
/// from the caller's stream.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::size_t state_dim() const = 0;
  virtual std::size_t action_dim() const = 0;
  virtual std::size_t horizon() const = 0;
  virtual Vector initial_state() const = 0;
  /// `stage` is 0-based.
  virtual StepOutcome step(std::size_t stage, const Vector& state, const Vector& action, CounterRng& rng) const = 0;

  /// sup of |noiseless reward| over reachable state-action pairs.
  virtual double reward_bound() const = 0;
  virtual bool rewards_nonpositive() const = 0;
};

using Policy = std::function<Vector(std::size_t stage, const Vector& state)>;

/// Runs `horizon()` steps from the initial state. Each step draws transition
/// noise before reward noise.
Transcript run_episode(const Environment& env, const Policy& policy, CounterRng& rng, std::size_t episode_index = 0);

/// Rows are candidate actions: the tensor grid with `points_per_dim` uniform
/// points per coordinate of [-1, 1]^action_dim (first coordinate slowest).
Matrix uniform_action_grid(std::size_t action_dim, std::size_t points_per_dim);

// ---------------------------------------------------------------------------
// Squashed LQR

Vector squash(const Vector& x);

struct SquashedLqrConfig {
  Matrix A;
  Matrix B;
  Matrix Q;
  Matrix R;
  double noise_std = 0.1;
  double reward_noise_std = 0.0;
  std::size_t horizon = 20;
  Vector initial_state;

  /// Throws ConfigError on shape mismatch, asymmetric or indefinite Q/R,
  /// zero horizon, or an initial state outside the open unit ball.
  void validate() const;
  std::size_t state_dim() const { return static_cast<std::size_t>(A.rows()); }
  std::size_t action_dim() const { return static_cast<std::size_t>(B.cols()); }
};

/// One transition: next = squash(A s + B a + xi), reward = -s'Qs - a'Ra + eta.
StepOutcome lqr_step(const SquashedLqrConfig& cfg, const Vector& s, const Vector& a, CounterRng& rng);

/// Returns (left, right) configurations of the squashed-LQR comparison.
std::pair<SquashedLqrConfig, SquashedLqrConfig> reference_lqr_environments();

class SquashedLqr final : public Environment {
 public:
  explicit SquashedLqr(SquashedLqrConfig cfg);

  const SquashedLqrConfig& config() const { return cfg_; }
  std::size_t state_dim() const override { return cfg_.state_dim(); }
  std::size_t action_dim() const override { return cfg_.action_dim(); }
  std::size_t horizon() const override { return cfg_.horizon; }
  Vector initial_state() const override { return cfg_.initial_state; }
  StepOutcome step(std::size_t stage, const Vector& state, const Vector& action, CounterRng& rng) const override;
  /// lambda_max(Q) + max over the action box corners of a'Ra.
  double reward_bound() const override;
  bool rewards_nonpositive() const override { return true; }

 private:
  SquashedLqrConfig cfg_;
};

// ---------------------------------------------------------------------------
// Smooth-density MDP on [-1, 1] x [-1, 1]

using ScalarFn2 = std::function<double(double s, double a)>;
using DensityFn = std::function<double(double s_next, double s, double a)>;

struct SmoothDensityMdpConfig {
  ScalarFn2 mean_fn;
  double concentration = 8.0;
  ScalarFn2 reward_fn;
  std::size_t horizon = 2;
  double reward_noise_std = 0.0;
  double initial_state = 0.0;
  /// Replaces the truncated-Gaussian density when set; must be normalized
  /// and bounded above by `density_bound` (used for rejection sampling).
  DensityFn custom_density;
  double density_bound = 0.0;
  /// sup |reward_fn|, used for value clipping by learners.
  double reward_bound = 1.0;
};

/// mean 0.5 tanh(s + a), concentration 8, reward 0.5 cos(pi s) a.
SmoothDensityMdpConfig default_smooth_mdp(std::size_t horizon = 2);

/// Density of s' given (s, a). Default family: Gaussian with mean
/// mean_fn(s, a) and precision `concentration`, truncated to [-1, 1] and
/// normalized in closed form via erf; uniform 1/2 as concentration -> 0.
double density_eval(const SmoothDensityMdpConfig& cfg, double s_next, double s, double a);

class SmoothDensityMdp final : public Environment {
 public:
  explicit SmoothDensityMdp(SmoothDensityMdpConfig cfg);

  const SmoothDensityMdpConfig& config() const { return cfg_; }
  std::size_t state_dim() const override { return 1; }
  std::size_t action_dim() const override { return 1; }
  std::size_t horizon() const override { return cfg_.horizon; }
  Vector initial_state() const override;
  /// Samples s' by rejection from the uniform proposal.
  StepOutcome step(std::size_t stage, const Vector& state, const Vector& action, CounterRng& rng) const override;
  double reward_bound() const override { return cfg_.reward_bound; }
  bool rewards_nonpositive() const override { return false; }

 private:
  SmoothDensityMdpConfig cfg_;
};

// ---------------------------------------------------------------------------
// Finite tabular MDP (states and actions encoded as their index in a
// 1-vector). Rewards are deterministic means in [0, 1].

struct TabularMdpConfig {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::size_t horizon = 1;
  std::size_t initial_state = 0;
  /// transition[s * num_actions + a][s'] ; stationary across stages.
  std::vector<std::vector<double>> transition;
  /// reward[s * num_actions + a]
  std::vector<double> reward;
};

/// Random MDP: Dirichlet(1) transitions, uniform [0, 1] rewards.
TabularMdpConfig random_tabular_mdp(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                                    std::uint64_t seed);

class TabularMdp final : public Environment {
 public:
  explicit TabularMdp(TabularMdpConfig cfg);

  const TabularMdpConfig& config() const { return cfg_; }
  std::size_t state_dim() const override { return 1; }
  std::size_t action_dim() const override { return 1; }
  std::size_t horizon() const override { return cfg_.horizon; }
  Vector initial_state() const override;
  StepOutcome step(std::size_t stage, const Vector& state, const Vector& action, CounterRng& rng) const override;
  double reward_bound() const override { return 1.0; }
  bool rewards_nonpositive() const override { return false; }

  /// Q*[h][s * A + a] by backward induction.
  std::vector<std::vector<double>> optimal_q() const;
  double optimal_value() const;
  /// Expected return from the initial state of a deterministic policy
  /// policy[h][s] -> action.
  double policy_value(const std::vector<std::vector<std::size_t>>& policy) const;

  Matrix action_grid() const;

 private:
  TabularMdpConfig cfg_;
};

}  // namespace smoothrl
