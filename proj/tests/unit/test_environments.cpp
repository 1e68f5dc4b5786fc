#include <cmath>

#include "doctest.h"
#include "environments.hpp"
#include "error.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

using namespace smoothrl;

namespace {

SquashedLqrConfig noiseless(SquashedLqrConfig c) {
  c.noise_std = 0.0;
  c.reward_noise_std = 0.0;
  return c;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_SUITE("environments") {
  TEST_CASE("squash") {
    CHECK(squash(vec({0.0, 0.0})).norm() == 0.0);
    const Vector s = squash(vec({3.0, 4.0}));
    CHECK(s(0) == doctest::Approx(0.5));
    CHECK(s(1) == doctest::Approx(4.0 / 6.0));
    CounterRng rng(3);
    for (int i = 0; i < 100000; ++i) {
      Vector x(3);
      for (int j = 0; j < 3; ++j) x(j) = rng.normal();
      x *= 1000.0 * rng.uniform() / std::max(x.norm(), 1e-300);
      CHECK(squash(x).norm() < 1.0);
    }
  }

  TEST_CASE("reference LQR configurations") {
    const auto [left, right] = reference_lqr_environments();
    CHECK(left.A(0, 0) == 0.7);
    CHECK(left.A(0, 1) == 0.7);
    CHECK(left.A(1, 0) == -0.7);
    CHECK(left.A(1, 1) == 0.7);
    CHECK(right.A(0, 0) == 0.0);
    CHECK(right.A(0, 1) == 1.0);
    CHECK(right.A(1, 0) == 1.0);
    CHECK(right.A(1, 1) == 0.0);
    for (const auto* c : {&left, &right}) {
      CHECK(c->R.rows() == 1);
      CHECK(c->R(0, 0) == 0.2);
      CHECK(c->Q.isIdentity());
      CHECK(c->B.isApprox(Matrix::Ones(2, 1)));
      CHECK(c->horizon == 20);
    }
  }

  TEST_CASE("lqr step by hand") {
    CounterRng rng(0);
    const auto cfg = noiseless(reference_lqr_environments().first);
    const StepOutcome zero = lqr_step(cfg, Vector::Zero(2), Vector::Zero(1), rng);
    CHECK(zero.next_state.norm() == 0.0);
    CHECK(zero.reward == 0.0);

    const StepOutcome o = lqr_step(cfg, vec({0.1, 0.2}), vec({0.3}), rng);
    // A s + B a = (0.51, 0.37); divided by 1 + sqrt(0.397).
    const double denom = 1.0 + std::sqrt(0.51 * 0.51 + 0.37 * 0.37);
    CHECK(o.next_state(0) == doctest::Approx(0.51 / denom).epsilon(1e-12));
    CHECK(o.next_state(1) == doctest::Approx(0.37 / denom).epsilon(1e-12));
    CHECK(o.next_state(0) == doctest::Approx(0.312868).epsilon(1e-6));
    CHECK(o.next_state(1) == doctest::Approx(0.226983).epsilon(1e-6));
    CHECK(o.reward == doctest::Approx(-0.068).epsilon(1e-12));

    SquashedLqrConfig null = cfg;
    null.A.setZero();
    null.B.setZero();
    CHECK(lqr_step(null, vec({0.4, -0.2}), vec({0.9}), rng).next_state.norm() == 0.0);
  }

  TEST_CASE("config validation") {
    auto cfg = reference_lqr_environments().first;
    cfg.Q(0, 1) = 0.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = reference_lqr_environments().first;
    cfg.R(0, 0) = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = reference_lqr_environments().first;
    cfg.B = Matrix::Ones(3, 1);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = reference_lqr_environments().first;
    cfg.initial_state = vec({1.0, 0.0});
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = reference_lqr_environments().first;
    cfg.horizon = 0;
    CHECK_THROWS_AS(SquashedLqr{cfg}, ConfigError);
  }

  TEST_CASE("episodes") {
    const SquashedLqr quiet(noiseless(reference_lqr_environments().first));
    CounterRng rng(1);
    const Transcript zero = run_episode(quiet, [](std::size_t, const Vector&) { return Vector::Zero(1); }, rng);
    CHECK(zero.steps.size() == 20);
    CHECK(zero.total_return() == 0.0);
    for (const auto& step : zero.steps) CHECK(step.state.norm() == 0.0);

    const SquashedLqr noisy(reference_lqr_environments().second);
    auto policy = [](std::size_t h, const Vector& s) { return Vector::Constant(1, 0.3 * std::sin(h + s(0))); };
    CounterRng r1(derive_stream(9, "replay")), r2(derive_stream(9, "replay"));
    const Transcript a = run_episode(noisy, policy, r1, 4), b = run_episode(noisy, policy, r2, 4);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t h = 0; h < a.steps.size(); ++h) {
      CHECK(a.steps[h].state == b.steps[h].state);
      CHECK(a.steps[h].reward == b.steps[h].reward);
    }
    CHECK(a.final_state == b.final_state);
    CHECK(a.episode_index == 4);
  }

  TEST_CASE("noise draws are consumed in a fixed order") {
    // Transition noise (2 normals) then reward noise (1 normal) per step,
    // each normal consuming two counter values, even when a level is zero.
    const SquashedLqr env(reference_lqr_environments().first);
    CounterRng rng(5);
    run_episode(env, [](std::size_t, const Vector&) { return Vector::Zero(1); }, rng);
    CHECK(rng.counter() == 20u * 3u * 2u);
  }

  TEST_CASE("action grid") {
    const Matrix g = uniform_action_grid(1, 21);
    CHECK(g.rows() == 21);
    CHECK(g(0, 0) == -1.0);
    CHECK(g(20, 0) == 1.0);
    CHECK(g(10, 0) == doctest::Approx(0.0).scale(1.0));
    const Matrix g2 = uniform_action_grid(2, 3);
    CHECK(g2.rows() == 9);
    CHECK(g2(1, 0) == -1.0);
    CHECK(g2(1, 1) == 0.0);
    CHECK(uniform_action_grid(1, 1)(0, 0) == 0.0);
  }

  TEST_CASE("smooth density integrates to one") {
    const auto cfg = default_smooth_mdp();
    const QuadratureRule rule = gauss_legendre(128);
    CounterRng rng(12);
    for (int i = 0; i < 20; ++i) {
      const double s = 2 * rng.uniform() - 1, a = 2 * rng.uniform() - 1;
      CHECK(rule.integrate([&](double x) { return density_eval(cfg, x, s, a); }) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("density symmetry and flat limit") {
    auto cfg = default_smooth_mdp();
    cfg.mean_fn = [](double, double) { return 0.0; };
    for (double x : {0.1, 0.5, 0.93}) CHECK(density_eval(cfg, x, 0.3, -0.2) == doctest::Approx(density_eval(cfg, -x, 0.3, -0.2)));
    cfg = default_smooth_mdp();
    cfg.concentration = 1e-10;
    for (double x : {-0.9, 0.0, 0.7}) CHECK(density_eval(cfg, x, 0.2, 0.4) == doctest::Approx(0.5).epsilon(1e-8));
  }

  TEST_CASE("smooth MDP sampling follows the density") {
    const SmoothDensityMdp env(default_smooth_mdp());
    CounterRng rng(derive_stream(2, "moments"));
    const double s = 0.2, a = 0.5;
    const int n = 20000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      const StepOutcome o = env.step(0, Vector::Constant(1, s), Vector::Constant(1, a), rng);
      CHECK(std::abs(o.next_state(0)) <= 1.0);
      mean += o.next_state(0) / n;
    }
    const auto cfg = default_smooth_mdp();
    const double expected = gauss_legendre(128).integrate([&](double x) { return x * density_eval(cfg, x, s, a); });
    CHECK(mean == doctest::Approx(expected).epsilon(0.02));
    const StepOutcome o = env.step(0, Vector::Constant(1, 0.0), Vector::Constant(1, 0.6), rng);
    CHECK(o.reward == doctest::Approx(0.3));
  }

  TEST_CASE("tabular MDP") {
    const TabularMdp mdp(random_tabular_mdp(5, 2, 4, 3));
    for (const auto& row : mdp.config().transition) {
      double sum = 0.0;
      for (double p : row) sum += p;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    const auto q = mdp.optimal_q();
    std::vector<std::vector<std::size_t>> greedy(4, std::vector<std::size_t>(5));
    for (std::size_t h = 0; h < 4; ++h)
      for (std::size_t s = 0; s < 5; ++s) greedy[h][s] = q[h][2 * s + 1] > q[h][2 * s] ? 1 : 0;
    CHECK(mdp.policy_value(greedy) == doctest::Approx(mdp.optimal_value()).epsilon(1e-12));
    std::vector<std::vector<std::size_t>> fixed(4, std::vector<std::size_t>(5, 0));
    CHECK(mdp.policy_value(fixed) <= mdp.optimal_value() + 1e-12);

    // Monte-Carlo value of the greedy policy.
    CounterRng rng(8);
    double total = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
      total += run_episode(mdp,
                           [&](std::size_t h, const Vector& s) {
                             return Vector::Constant(1, static_cast<double>(greedy[h][static_cast<std::size_t>(s(0))]));
                           },
                           rng)
                   .total_return();
    CHECK(total / n == doctest::Approx(mdp.optimal_value()).epsilon(0.02));
  }
}
