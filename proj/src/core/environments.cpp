#include "environments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "error.hpp"

namespace smoothrl {

double Transcript::total_return() const {
  double total = 0.0;
  for (const auto& step : steps) total += step.reward;
  return total;
}

Transcript run_episode(const Environment& env, const Policy& policy, CounterRng& rng, std::size_t episode_index) {
  Transcript t;
  t.episode_index = episode_index;
  t.steps.reserve(env.horizon());
  Vector state = env.initial_state();
  for (std::size_t h = 0; h < env.horizon(); ++h) {
    Vector action = policy(h, state);
    if (static_cast<std::size_t>(action.size()) != env.action_dim())
      throw InvalidArgument("policy returned an action of dimension " + std::to_string(action.size()));
    StepOutcome out = env.step(h, state, action, rng);
    t.steps.push_back(StepRecord{std::move(state), std::move(action), out.reward});
    state = std::move(out.next_state);
  }
  t.final_state = std::move(state);
  return t;
}

Matrix uniform_action_grid(std::size_t action_dim, std::size_t points_per_dim) {
  if (action_dim == 0 || points_per_dim == 0) throw InvalidArgument("action grid: empty grid requested");
  std::size_t count = 1;
  for (std::size_t i = 0; i < action_dim; ++i) count *= points_per_dim;
  Matrix grid(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(action_dim));
  const auto coord = [&](std::size_t j) {
    return points_per_dim == 1 ? 0.0
                               : -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(points_per_dim - 1);
  };
  for (std::size_t row = 0; row < count; ++row) {
    std::size_t rest = row;
    for (std::size_t i = action_dim; i-- > 0;) {
      grid(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i)) = coord(rest % points_per_dim);
      rest /= points_per_dim;
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------

Vector squash(const Vector& x) { return x / (1.0 + x.norm()); }

namespace {

bool symmetric_psd(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -1e-12;
}

}  // namespace

void SquashedLqrConfig::validate() const {
  const auto n = A.rows();
  if (n == 0 || A.cols() != n) throw ConfigError("lqr: A must be square and non-empty");
  if (B.rows() != n || B.cols() == 0) throw ConfigError("lqr: B must have as many rows as A");
  if (Q.rows() != n || !symmetric_psd(Q)) throw ConfigError("lqr: Q must be symmetric PSD of state dimension");
  if (R.rows() != B.cols() || !symmetric_psd(R)) throw ConfigError("lqr: R must be symmetric PSD of action dimension");
  if (horizon == 0) throw ConfigError("lqr: horizon must be positive");
  if (noise_std < 0.0 || reward_noise_std < 0.0) throw ConfigError("lqr: noise levels must be non-negative");
  if (initial_state.size() != n || !(initial_state.norm() < 1.0))
    throw ConfigError("lqr: initial state must lie in the open unit ball");
}

StepOutcome lqr_step(const SquashedLqrConfig& cfg, const Vector& s, const Vector& a, CounterRng& rng) {
  if (s.size() != cfg.A.rows() || a.size() != cfg.B.cols())
    throw InvalidArgument("lqr_step: state/action dimension mismatch");
  Vector pre = cfg.A * s + cfg.B * a;
  for (Eigen::Index i = 0; i < pre.size(); ++i) pre(i) += cfg.noise_std * rng.normal();
  const double eta = rng.normal();
  StepOutcome out;
  out.next_state = squash(pre);
  out.reward = -s.dot(cfg.Q * s) - a.dot(cfg.R * a) + cfg.reward_noise_std * eta;
  return out;
}

std::pair<SquashedLqrConfig, SquashedLqrConfig> reference_lqr_environments() {
  SquashedLqrConfig left;
  left.A = (Matrix(2, 2) << 0.7, 0.7, -0.7, 0.7).finished();
  left.B = (Matrix(2, 1) << 1.0, 1.0).finished();
  left.Q = Matrix::Identity(2, 2);
  left.R = (Matrix(1, 1) << 0.2).finished();
  left.noise_std = 0.1;
  left.reward_noise_std = 0.0;
  left.horizon = 20;
  left.initial_state = Vector::Zero(2);
  SquashedLqrConfig right = left;
  right.A = (Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
  return {left, right};
}

SquashedLqr::SquashedLqr(SquashedLqrConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

StepOutcome SquashedLqr::step(std::size_t, const Vector& state, const Vector& action, CounterRng& rng) const {
  return lqr_step(cfg_, state, action, rng);
}

double SquashedLqr::reward_bound() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(cfg_.Q, Eigen::EigenvaluesOnly);
  const double state_part = std::max(0.0, solver.eigenvalues().maxCoeff());
  // a'Ra is convex, so its max over the box sits on a corner
  const auto d = static_cast<std::size_t>(cfg_.R.rows());
  double action_part = 0.0;
  Vector corner(static_cast<Eigen::Index>(d));
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    for (std::size_t i = 0; i < d; ++i) corner(static_cast<Eigen::Index>(i)) = (mask >> i & 1U) ? 1.0 : -1.0;
    action_part = std::max(action_part, corner.dot(cfg_.R * corner));
  }
  return state_part + action_part;
}

// ---------------------------------------------------------------------------

SmoothDensityMdpConfig default_smooth_mdp(std::size_t horizon) {
  SmoothDensityMdpConfig cfg;
  cfg.mean_fn = [](double s, double a) { return 0.5 * std::tanh(s + a); };
  cfg.concentration = 8.0;
  cfg.reward_fn = [](double s, double a) { return 0.5 * std::cos(std::numbers::pi * s) * a; };
  cfg.horizon = horizon;
  cfg.reward_bound = 0.5;
  return cfg;
}

namespace {

constexpr double kUniformConcentration = 1e-12;

void check_unit(double v, const char* what) {
  if (!(std::abs(v) <= 1.0 + 1e-12)) throw DomainError(std::string("density: ") + what + " outside [-1, 1]");
}

double gaussian_normalizer(double mean, double kappa) {
  const double r = std::sqrt(kappa / 2.0);
  return std::sqrt(std::numbers::pi / (2.0 * kappa)) * (std::erf(r * (1.0 - mean)) + std::erf(r * (1.0 + mean)));
}

}  // namespace

double density_eval(const SmoothDensityMdpConfig& cfg, double s_next, double s, double a) {
  check_unit(s_next, "next state");
  check_unit(s, "state");
  check_unit(a, "action");
  if (cfg.custom_density) return cfg.custom_density(s_next, s, a);
  if (cfg.concentration < kUniformConcentration) return 0.5;
  const double m = cfg.mean_fn(s, a);
  const double z = s_next - m;
  return std::exp(-0.5 * cfg.concentration * z * z) / gaussian_normalizer(m, cfg.concentration);
}

SmoothDensityMdp::SmoothDensityMdp(SmoothDensityMdpConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.reward_fn) throw ConfigError("smooth mdp: reward_fn is required");
  if (!cfg_.custom_density && !cfg_.mean_fn) throw ConfigError("smooth mdp: mean_fn is required");
  if (cfg_.custom_density && !(cfg_.density_bound > 0.0))
    throw ConfigError("smooth mdp: custom density needs a positive density_bound");
  if (cfg_.concentration < 0.0) throw ConfigError("smooth mdp: concentration must be non-negative");
  if (cfg_.horizon == 0) throw ConfigError("smooth mdp: horizon must be positive");
}

Vector SmoothDensityMdp::initial_state() const { return Vector::Constant(1, cfg_.initial_state); }

StepOutcome SmoothDensityMdp::step(std::size_t, const Vector& state, const Vector& action, CounterRng& rng) const {
  const double s = state(0), a = std::clamp(action(0), -1.0, 1.0);
  constexpr int kMaxTries = 1000000;
  double next = 0.0;
  bool accepted = false;
  for (int i = 0; i < kMaxTries && !accepted; ++i) {
    next = 2.0 * rng.uniform() - 1.0;
    const double u = rng.uniform();
    if (cfg_.custom_density) {
      accepted = u * cfg_.density_bound <= cfg_.custom_density(next, s, a);
    } else if (cfg_.concentration < kUniformConcentration) {
      accepted = true;
    } else {
      const double z = next - cfg_.mean_fn(s, a);
      accepted = u <= std::exp(-0.5 * cfg_.concentration * z * z);
    }
  }
  if (!accepted) throw NumericalError("smooth mdp: rejection sampler did not accept");
  StepOutcome out;
  out.next_state = Vector::Constant(1, next);
  out.reward = cfg_.reward_fn(s, a) + cfg_.reward_noise_std * rng.normal();
  return out;
}

// ---------------------------------------------------------------------------

TabularMdpConfig random_tabular_mdp(std::size_t num_states, std::size_t num_actions, std::size_t horizon,
                                    std::uint64_t seed) {
  CounterRng rng(derive_stream(seed, "tabular-mdp"));
  TabularMdpConfig cfg;
  cfg.num_states = num_states;
  cfg.num_actions = num_actions;
  cfg.horizon = horizon;
  cfg.transition.resize(num_states * num_actions);
  cfg.reward.resize(num_states * num_actions);
  for (std::size_t sa = 0; sa < num_states * num_actions; ++sa) {
    auto& row = cfg.transition[sa];
    row.resize(num_states);
    double total = 0.0;
    for (double& p : row) total += (p = -std::log(rng.uniform_open_low()));
    for (double& p : row) p /= total;
    cfg.reward[sa] = rng.uniform();
  }
  return cfg;
}

TabularMdp::TabularMdp(TabularMdpConfig cfg) : cfg_(std::move(cfg)) {
  const std::size_t sa = cfg_.num_states * cfg_.num_actions;
  if (sa == 0 || cfg_.horizon == 0) throw ConfigError("tabular mdp: empty state/action space or horizon");
  if (cfg_.transition.size() != sa || cfg_.reward.size() != sa) throw ConfigError("tabular mdp: table size mismatch");
  for (const auto& row : cfg_.transition) {
    if (row.size() != cfg_.num_states) throw ConfigError("tabular mdp: transition row size mismatch");
    double total = 0.0;
    for (double p : row) total += p;
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("tabular mdp: transition row does not sum to 1");
  }
  if (cfg_.initial_state >= cfg_.num_states) throw ConfigError("tabular mdp: initial state out of range");
}

Vector TabularMdp::initial_state() const { return Vector::Constant(1, static_cast<double>(cfg_.initial_state)); }

StepOutcome TabularMdp::step(std::size_t, const Vector& state, const Vector& action, CounterRng& rng) const {
  const auto s = static_cast<std::size_t>(state(0));
  const auto a = static_cast<std::size_t>(action(0));
  if (s >= cfg_.num_states || a >= cfg_.num_actions) throw InvalidArgument("tabular mdp: index out of range");
  const auto& row = cfg_.transition[s * cfg_.num_actions + a];
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t next = cfg_.num_states - 1;
  for (std::size_t j = 0; j < row.size(); ++j) {
    acc += row[j];
    if (u < acc) {
      next = j;
      break;
    }
  }
  return StepOutcome{Vector::Constant(1, static_cast<double>(next)), cfg_.reward[s * cfg_.num_actions + a]};
}

std::vector<std::vector<double>> TabularMdp::optimal_q() const {
  const std::size_t S = cfg_.num_states, A = cfg_.num_actions, H = cfg_.horizon;
  std::vector<std::vector<double>> q(H, std::vector<double>(S * A, 0.0));
  std::vector<double> v_next(S, 0.0);
  for (std::size_t h = H; h-- > 0;) {
    for (std::size_t sa = 0; sa < S * A; ++sa) {
      double cont = 0.0;
      for (std::size_t j = 0; j < S; ++j) cont += cfg_.transition[sa][j] * v_next[j];
      q[h][sa] = cfg_.reward[sa] + cont;
    }
    for (std::size_t s = 0; s < S; ++s)
      v_next[s] = *std::max_element(q[h].begin() + static_cast<std::ptrdiff_t>(s * A),
                                    q[h].begin() + static_cast<std::ptrdiff_t>((s + 1) * A));
  }
  return q;
}

double TabularMdp::optimal_value() const {
  const auto q = optimal_q();
  const std::size_t A = cfg_.num_actions, s0 = cfg_.initial_state;
  return *std::max_element(q[0].begin() + static_cast<std::ptrdiff_t>(s0 * A),
                           q[0].begin() + static_cast<std::ptrdiff_t>((s0 + 1) * A));
}

double TabularMdp::policy_value(const std::vector<std::vector<std::size_t>>& policy) const {
  const std::size_t S = cfg_.num_states, A = cfg_.num_actions, H = cfg_.horizon;
  if (policy.size() != H) throw InvalidArgument("policy_value: policy must cover every stage");
  std::vector<double> v(S, 0.0), next(S, 0.0);
  for (std::size_t h = H; h-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t sa = s * A + policy[h].at(s);
      double cont = 0.0;
      for (std::size_t j = 0; j < S; ++j) cont += cfg_.transition[sa][j] * next[j];
      v[s] = cfg_.reward[sa] + cont;
    }
    std::swap(v, next);
  }
  return next[cfg_.initial_state];
}

Matrix TabularMdp::action_grid() const {
  Matrix grid(static_cast<Eigen::Index>(cfg_.num_actions), 1);
  for (std::size_t a = 0; a < cfg_.num_actions; ++a) grid(static_cast<Eigen::Index>(a), 0) = static_cast<double>(a);
  return grid;
}

}  // namespace smoothrl
