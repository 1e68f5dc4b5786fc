#include <cmath>
#include <memory>

#include "doctest.h"
#include "environments.hpp"
#include "error.hpp"
#include "lsvi.hpp"
#include "rng.hpp"
#include "state_action_features.hpp"

using namespace smoothrl;

namespace {

// Scaled copy of another feature map.
class ScaledFeatures final : public StateActionFeatures {
 public:
  ScaledFeatures(std::shared_ptr<const StateActionFeatures> base, double c) : base_(std::move(base)), c_(c) {}
  std::size_t length() const override { return base_->length(); }
  void evaluate(const Vector& s, const Vector& a, std::span<double> out) const override {
    base_->evaluate(s, a, out);
    for (double& v : out) v *= c_;
  }

 private:
  std::shared_ptr<const StateActionFeatures> base_;
  double c_;
};

// Constant features regardless of input.
class FixedFeatures final : public StateActionFeatures {
 public:
  explicit FixedFeatures(Vector phi) : phi_(std::move(phi)) {}
  std::size_t length() const override { return static_cast<std::size_t>(phi_.size()); }
  void evaluate(const Vector&, const Vector&, std::span<double> out) const override {
    for (Eigen::Index i = 0; i < phi_.size(); ++i) out[static_cast<std::size_t>(i)] = phi_(i);
  }

 private:
  Vector phi_;
};

std::shared_ptr<const StateActionFeatures> lqr_features(unsigned degree) {
  return std::make_shared<PolynomialStateActionFeatures>(FeatureMap(BasisKind::kLegendreOrthonormal, 3, degree), 2, 1);
}

Transcript random_transcript(const Environment& env, CounterRng& rng) {
  return run_episode(env, [&](std::size_t, const Vector&) { return Vector::Constant(1, 2 * rng.uniform() - 1); }, rng);
}

Transcript single_step(double reward, const Vector& s, const Vector& a) {
  Transcript t;
  t.steps.push_back({s, a, reward});
  t.final_state = s;
  return t;
}

}  // namespace

TEST_SUITE("lsvi") {
  TEST_CASE("degree rule") {
    CHECK(choose_degree(1, 3, 0) == 1);
    CHECK(choose_degree(1024, 2, 1) == 4);
    CHECK(choose_degree(500, 3, 2) == 2);
    CHECK(std::pow(1024.0, 1.0 / 6.0) == doctest::Approx(3.1748).epsilon(1e-4));
    CHECK(choose_degree(64, 4, 0) == 2);  // 64^{1/6} = 2 exactly
    CHECK_THROWS_AS(choose_degree(0, 2, 1), InvalidArgument);
  }

  TEST_CASE("bonus scale formula") {
    const double b = default_bonus_scale(20, 500, 20, 1.0, 0.05);
    CHECK(b == doctest::Approx(std::sqrt(20.0 * std::log(2.0 * 20 * 500 * 20 / 0.05))));
    CHECK(default_bonus_scale(20, 500, 20, 0.0) == 0.0);
  }

  TEST_CASE("empty learner") {
    const SquashedLqr env(reference_lqr_environments().first);
    LsviConfig cfg{2.0, 1.0, value_range_for(env)};
    const LsviLearner l(lqr_features(2), 20, uniform_action_grid(1, 5), cfg);
    for (std::size_t h = 0; h < 20; ++h) {
      CHECK(l.gram(h).isApprox(2.0 * Matrix::Identity(10, 10)));
      CHECK(l.weights(h).norm() == 0.0);
    }
    CHECK(value_range_for(env).lo == doctest::Approx(-20 * env.reward_bound()));
    CHECK(value_range_for(env).hi == 0.0);
  }

  TEST_CASE("rank-one update matches dense inversion") {
    const SquashedLqr env(reference_lqr_environments().first);
    LsviConfig cfg{1.0, 0.5, value_range_for(env)};
    LsviLearner l(lqr_features(3), 20, uniform_action_grid(1, 5), cfg);
    CounterRng rng(derive_stream(4, "sm"));
    l.update(random_transcript(env, rng));
    for (std::size_t h = 0; h < 20; ++h) {
      const Matrix dense = l.gram(h).inverse();
      CHECK((l.gram_inverse(h) - dense).cwiseAbs().maxCoeff() < 1e-10);
    }
    for (int k = 0; k < 30; ++k) l.update(random_transcript(env, rng));
    for (std::size_t h = 0; h < 20; h += 7) {
      CHECK((l.gram_inverse(h) * l.gram(h) - Matrix::Identity(20, 20)).cwiseAbs().maxCoeff() < 1e-8);
      const Eigen::SelfAdjointEigenSolver<Matrix> eig(l.gram(h));
      CHECK(eig.eigenvalues().minCoeff() >= 1.0 - 1e-8);
    }
  }

  TEST_CASE("two identical transitions solve the ridge system along phi") {
    Vector phi(3);
    phi << 0.3, -0.4, 0.5;
    auto f = std::make_shared<FixedFeatures>(phi);
    LsviConfig cfg{1.0, 0.0, {-10.0, 10.0}};
    LsviLearner l(f, 1, Matrix::Zero(1, 1), cfg);
    const Vector s = Vector::Zero(1), a = Vector::Zero(1);
    l.update(single_step(1.0, s, a));
    l.update(single_step(1.0, s, a));
    // (I + 2 phi phi') w = 2 phi  =>  w = 2 phi / (1 + 2 |phi|^2)
    const Vector expected = 2.0 * phi / (1.0 + 2.0 * phi.squaredNorm());
    CHECK((l.weights(0) - expected).norm() < 1e-12);
  }

  TEST_CASE("pure bonus and clipping") {
    Vector phi(4);
    phi << 0.3, 0.0, -0.4, 0.0;  // norm 0.5
    auto f = std::make_shared<FixedFeatures>(phi);
    const Vector s = Vector::Zero(1), a = Vector::Zero(1);
    LsviLearner bonus_only(f, 2, Matrix::Zero(1, 1), {1.0, 1.0, {-100.0, 100.0}});
    CHECK(bonus_only.q_value(0, s, a) == doctest::Approx(0.5));
    LsviLearner no_bonus(f, 2, Matrix::Zero(1, 1), {1.0, 0.0, {-100.0, 100.0}});
    CHECK(no_bonus.q_value(1, s, a) == 0.0);
    LsviLearner clipped(f, 2, Matrix::Zero(1, 1), {1.0, 50.0, {-1.0, 1.0}});
    CHECK(clipped.q_value(0, s, a) == 1.0);
  }

  TEST_CASE("q values stay inside the value range") {
    const SquashedLqr env(reference_lqr_environments().second);
    const ValueRange range = value_range_for(env);
    LsviLearner l(lqr_features(3), 20, uniform_action_grid(1, 7), {0.1, 0.05, range});
    CounterRng rng(derive_stream(3, "clip"));
    for (int k = 0; k < 20; ++k) l.update(random_transcript(env, rng));
    for (int i = 0; i < 200; ++i) {
      Vector s(2);
      s << 2 * rng.uniform() - 1, 2 * rng.uniform() - 1;
      s *= 0.7;
      const double q = l.q_value(i % 20, s, Vector::Constant(1, 2 * rng.uniform() - 1));
      CHECK((q >= range.lo && q <= range.hi));
    }
  }

  TEST_CASE("action selection rules") {
    Vector phi(2);
    phi << 0.1, 0.2;
    LsviLearner flat(std::make_shared<FixedFeatures>(phi), 1, uniform_action_grid(1, 5), {1.0, 1.0, {-5.0, 5.0}});
    CHECK(flat.select_action_index(0, Vector::Zero(1)) == 0);
    const Matrix single = Matrix::Constant(1, 1, 0.4);
    CHECK(flat.select_action_index(0, Vector::Zero(1), single) == 0);
    CHECK(first_argmax((Vector(4) << 1.0, 3.0, 3.0, 2.0).finished()) == 1);

    // Empty data: the max-norm feature wins once beta > 0.
    const auto feats = lqr_features(3);
    const Matrix grid = uniform_action_grid(1, 11);
    LsviLearner l(feats, 3, grid, {1.0, 1.0, {-100.0, 100.0}});
    Vector s(2);
    s << 0.2, -0.5;
    std::size_t best = 0;
    double best_norm = -1.0;
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
      const double n = feats->evaluate(s, grid.row(i).transpose()).norm();
      if (n > best_norm + 1e-15) {
        best_norm = n;
        best = static_cast<std::size_t>(i);
      }
    }
    CHECK(l.select_action_index(0, s) == best);
  }

  TEST_CASE("bonus is monotone under updates") {
    const SquashedLqr env(reference_lqr_environments().first);
    LsviLearner l(lqr_features(2), 20, uniform_action_grid(1, 5), {1.0, 1.0, {-1e9, 1e9}});
    CounterRng rng(derive_stream(6, "bonus"));
    std::vector<std::pair<Vector, Vector>> queries;
    for (int i = 0; i < 20; ++i) {
      Vector s(2);
      s << 0.9 * (2 * rng.uniform() - 1), 0.4 * (2 * rng.uniform() - 1);
      queries.emplace_back(s, Vector::Constant(1, 2 * rng.uniform() - 1));
    }
    std::vector<double> prev;
    for (const auto& [s, a] : queries) prev.push_back(l.bonus(3, s, a));
    for (int k = 0; k < 100; ++k) {
      l.update(random_transcript(env, rng));
      for (std::size_t i = 0; i < queries.size(); ++i) {
        const double b = l.bonus(3, queries[i].first, queries[i].second);
        CHECK(b <= prev[i] + 1e-12);
        prev[i] = b;
      }
    }
  }

  TEST_CASE("feature scaling with lambda scaled by c^2 leaves actions unchanged") {
    const SquashedLqr env(reference_lqr_environments().second);
    const auto base = lqr_features(3);
    const Matrix grid = uniform_action_grid(1, 11);
    for (double c : {0.5, 2.0}) {
      const double lambda = 0.3, beta = 0.2;
      LsviLearner a(base, 20, grid, {lambda, beta, {-1e9, 1e9}});
      LsviLearner b(std::make_shared<ScaledFeatures>(base, c), 20, grid, {c * c * lambda, beta, {-1e9, 1e9}});
      CounterRng rng(derive_stream(static_cast<std::uint64_t>(c * 10), "scale"));
      for (int k = 0; k < 15; ++k) {
        const Transcript t = random_transcript(env, rng);
        a.update(t);
        b.update(t);
      }
      for (int i = 0; i < 100; ++i) {
        Vector s(2);
        s << 0.8 * (2 * rng.uniform() - 1), 0.8 * (2 * rng.uniform() - 1);
        const std::size_t h = static_cast<std::size_t>(i % 20);
        CHECK(a.q_value(h, s, grid.row(3).transpose()) ==
              doctest::Approx(b.q_value(h, s, grid.row(3).transpose())).epsilon(1e-8));
        CHECK(a.select_action_index(h, s) == b.select_action_index(h, s));
      }
    }
  }

  TEST_CASE("optimism on a tabular MDP with one-hot features") {
    std::size_t checks = 0, optimistic = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const TabularMdp mdp(random_tabular_mdp(5, 2, 3, seed));
      const auto qstar = mdp.optimal_q();
      const std::size_t K = 40;
      LsviConfig cfg{1.0, default_bonus_scale(10, K, 3), value_range_for(mdp)};
      LsviLearner l(std::make_shared<OneHotFeatures>(5, 2), 3, mdp.action_grid(), cfg);
      CounterRng rng(derive_stream(seed, "optimism"));
      for (std::size_t k = 0; k < K; ++k) {
        l.update(run_episode(mdp, [&](std::size_t h, const Vector& s) { return l.select_action(h, s); }, rng, k));
        for (std::size_t h = 0; h < 3; ++h)
          for (std::size_t s = 0; s < 5; ++s)
            for (std::size_t a = 0; a < 2; ++a) {
              ++checks;
              const double q = l.q_value(h, Vector::Constant(1, double(s)), Vector::Constant(1, double(a)));
              if (q >= qstar[h][s * 2 + a] - 1e-12) ++optimistic;
            }
      }
    }
    CHECK(static_cast<double>(optimistic) >= 0.95 * static_cast<double>(checks));
  }

  TEST_CASE("identical seeds give identical weights") {
    const SquashedLqr env(reference_lqr_environments().first);
    const Matrix grid = uniform_action_grid(1, 9);
    LsviLearner a(lqr_features(2), 20, grid, {0.1, 0.05, value_range_for(env)});
    LsviLearner b(lqr_features(2), 20, grid, {0.1, 0.05, value_range_for(env)});
    CounterRng ra(derive_stream(1, "det")), rb(derive_stream(1, "det"));
    for (std::size_t k = 0; k < 10; ++k) {
      a.update(run_episode(env, [&](std::size_t h, const Vector& s) { return a.select_action(h, s); }, ra, k));
      b.update(run_episode(env, [&](std::size_t h, const Vector& s) { return b.select_action(h, s); }, rb, k));
      for (std::size_t h = 0; h < 20; ++h) CHECK(a.weights(h) == b.weights(h));
    }
  }

  TEST_CASE("invalid configuration") {
    const auto f = lqr_features(2);
    CHECK_THROWS_AS(LsviLearner(f, 3, uniform_action_grid(1, 3), {0.0, 1.0, {-1, 1}}), InvalidArgument);
    CHECK_THROWS_AS(LsviLearner(f, 3, uniform_action_grid(1, 3), {1.0, -1.0, {-1, 1}}), InvalidArgument);
    CHECK_THROWS_AS(LsviLearner(f, 3, Matrix(0, 1), {1.0, 1.0, {-1, 1}}), InvalidArgument);
  }
}
