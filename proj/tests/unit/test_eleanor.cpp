#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "eleanor.hpp"
#include "error.hpp"
#include "lsvi.hpp"
#include "rng.hpp"
#include "stage_dataset.hpp"
#include "state_action_features.hpp"

using namespace smoothrl;

namespace {

std::vector<double> random_row(CounterRng& rng, std::size_t n) {
  std::vector<double> v(n);
  double sq = 0.0;
  for (double& x : v) {
    x = 2 * rng.uniform() - 1;
    sq += x * x;
  }
  const double scale = rng.uniform() / std::sqrt(sq);
  for (double& x : v) x *= scale;
  return v;
}

std::vector<StageData> random_stages(CounterRng& rng, std::size_t H, std::size_t n, std::size_t grid,
                                     std::size_t count) {
  std::vector<StageData> stages;
  for (std::size_t h = 0; h < H; ++h) {
    stages.emplace_back(n, grid, h + 1 < H);
    for (std::size_t t = 0; t < count; ++t) {
      std::vector<double> next;
      if (h + 1 < H)
        for (std::size_t b = 0; b < grid; ++b) {
          const auto row = random_row(rng, n);
          next.insert(next.end(), row.begin(), row.end());
        }
      stages.back().add(random_row(rng, n), rng.uniform(), next);
    }
  }
  return stages;
}

RowMatrix random_initial(CounterRng& rng, std::size_t n, std::size_t grid) {
  RowMatrix m(grid, n);
  for (std::size_t b = 0; b < grid; ++b) {
    const auto row = random_row(rng, n);
    for (std::size_t j = 0; j < n; ++j) m(b, j) = row[j];
  }
  return m;
}

EleanorOptions options(std::size_t H, double radius, double cap, std::size_t budget) {
  EleanorOptions o;
  o.lambda = 1.0;
  o.ridge_radius.assign(H, radius);
  o.norm_caps.assign(H, cap);
  o.budget = budget;
  return o;
}

}  // namespace

TEST_SUITE("eleanor") {
  TEST_CASE("radius schedule by direct summation") {
    CHECK(confidence_radii(3, 2.0).values == std::vector<double>{6.0, 2.0, 0.0});
    CHECK(confidence_radii(1, 5.0).values == std::vector<double>{0.0});
    const auto r = confidence_radii(4, 1.5).values;
    REQUIRE(r.size() == 4);
    CHECK(r[0] == doctest::Approx(7.125));
    CHECK(r[1] == doctest::Approx(3.75));
    CHECK(r[2] == doctest::Approx(1.5));
    CHECK(r[3] == 0.0);
    CHECK_THROWS_AS(confidence_radii(0, 2.0), InvalidArgument);
    CHECK_THROWS_AS(confidence_radii(3, 1.0), InvalidArgument);
  }

  TEST_CASE("norm caps") {
    const auto caps = norm_caps_from_schedule(confidence_radii(3, 2.0), 4, 0.5, 4.0);
    // sqrt(4 * 4) / 0.5 = 8
    CHECK(caps == std::vector<double>{56.0, 24.0, 8.0});
  }

  TEST_CASE("empty data with zero radii and caps") {
    std::vector<StageData> stages{StageData(3, 2, true), StageData(3, 2, false)};
    RowMatrix init = RowMatrix::Constant(2, 3, 0.3);
    CounterRng rng(1);
    const EleanorPlan plan = optimistic_plan(stages, init, options(2, 0.0, 0.0, 50), rng);
    for (const auto& t : plan.thetas) CHECK(t.norm() == 0.0);
    CHECK(plan.optimistic_value == 0.0);
    CHECK(plan.feasible);
  }

  TEST_CASE("one stage reduces to an optimistic linear bandit") {
    // One-hot features over 3 actions, each observed once.
    std::vector<StageData> stages{StageData(3, 3, false)};
    const double rewards[] = {0.2, 0.7, 0.4};
    for (int a = 0; a < 3; ++a) {
      std::vector<double> phi(3, 0.0);
      phi[a] = 1.0;
      stages[0].add(phi, rewards[a], {});
    }
    const RowMatrix init = RowMatrix::Identity(3, 3);
    const double r = 0.5;
    CounterRng rng(2);
    const EleanorPlan plan = optimistic_plan(stages, init, options(1, r, 100.0, 500), rng);

    // Brute force over a grid of the ellipsoid's bounding box (Gram = 2 I).
    const double hw = r / std::sqrt(2.0);
    const int m = 200;
    double best = -1e9;
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j)
        for (int k = 0; k <= m; ++k) {
          const double d[] = {-hw + 2 * hw * i / m, -hw + 2 * hw * j / m, -hw + 2 * hw * k / m};
          if (2.0 * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) > r * r + 1e-12) continue;
          double v = -1e9;
          for (int a = 0; a < 3; ++a) v = std::max(v, rewards[a] / 2.0 + d[a]);
          best = std::max(best, v);
        }
    CHECK(plan.optimistic_value == doctest::Approx(best).epsilon(1e-3).scale(1.0));
    CHECK(plan.optimistic_value == doctest::Approx(0.35 + hw).epsilon(1e-9));
  }

  TEST_CASE("zero budget returns the ridge centers") {
    CounterRng data_rng(derive_stream(3, "data"));
    auto stages = random_stages(data_rng, 2, 3, 4, 6);
    const RowMatrix init = random_initial(data_rng, 3, 4);
    CounterRng rng(4);
    const auto opts = options(2, 0.3, 100.0, 0);
    const EleanorPlan plan = optimistic_plan(stages, init, opts, rng);
    CHECK(plan.evaluations == 0);
    // Ridge chain, computed directly.
    Vector theta2(3), theta1(3);
    {
      const StageData& s = stages[1];
      const Matrix gram = Matrix::Identity(3, 3) + Matrix(s.features().transpose() * s.features());
      theta2 = gram.ldlt().solve(Vector(s.features().transpose() * s.rewards()));
    }
    {
      const StageData& s = stages[0];
      Vector targets = s.rewards();
      const Vector next = s.next_features() * theta2;
      for (std::size_t t = 0; t < s.count(); ++t) targets(t) += next.segment(t * 4, 4).maxCoeff();
      const Matrix gram = Matrix::Identity(3, 3) + Matrix(s.features().transpose() * s.features());
      theta1 = gram.ldlt().solve(Vector(s.features().transpose() * targets));
    }
    CHECK((plan.thetas[1] - theta2).norm() < 1e-12);
    CHECK((plan.thetas[0] - theta1).norm() < 1e-12);
    CHECK(plan.optimistic_value == doctest::Approx((init * theta1).maxCoeff()));
  }

  TEST_CASE("value is monotone in the budget and plans are feasible") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CounterRng data_rng(derive_stream(seed, "budget"));
      auto stages = random_stages(data_rng, 3, 3, 3, 5);
      const RowMatrix init = random_initial(data_rng, 3, 3);
      double prev = -1e300;
      for (std::size_t budget : {0u, 5u, 20u, 100u, 400u}) {
        CounterRng rng(derive_stream(seed, "plan"));
        const auto opts = options(3, 0.4, 3.0, budget);
        const EleanorPlan plan = optimistic_plan(stages, init, opts, rng);
        CHECK(plan.evaluations <= budget);
        CHECK(plan.optimistic_value >= prev - 1e-12);
        prev = plan.optimistic_value;
        if (plan.feasible) {
          CHECK(plan_residual(stages, plan.thetas, opts) <= opts.slack + 1e-12);
          for (std::size_t h = 0; h < 3; ++h) CHECK(plan.thetas[h].norm() <= opts.norm_caps[h] + opts.slack);
        }
      }
    }
  }

  TEST_CASE("acting on a plan") {
    const auto feats = std::make_shared<PolynomialStateActionFeatures>(FeatureMap(BasisKind::kLegendreOrthonormal, 2, 2), 1, 1);
    const Matrix grid = uniform_action_grid(1, 9);
    EleanorPlan plan;
    plan.thetas.assign(2, Vector::Zero(6));
    const Vector s = Vector::Constant(1, 0.3);
    CHECK(act(plan, 0, s, grid, *feats) == 0);
    CHECK(act(plan, 1, s, Matrix::Constant(1, 1, 0.2), *feats) == 0);
    // Index order (0,0),(0,1),(1,0),...: component 1 is p_0(s) p_1(a), increasing in a.
    plan.thetas[0](1) = 1.0;
    CHECK(act(plan, 0, s, grid, *feats) == 8);
    plan.thetas[0](1) = -1.0;
    CHECK(act(plan, 0, s, grid, *feats) == 0);
    CHECK_THROWS_AS(act(plan, 2, s, grid, *feats), InvalidArgument);
  }

  TEST_CASE("desk-scale guards") {
    std::vector<StageData> too_long(kEleanorMaxHorizon + 1, StageData(2, 1, true));
    RowMatrix init = RowMatrix::Zero(1, 2);
    CounterRng rng(1);
    CHECK_THROWS_AS(optimistic_plan(too_long, init, options(kEleanorMaxHorizon + 1, 1, 1, 1), rng), InvalidArgument);
    std::vector<StageData> wide{StageData(kEleanorMaxFeatures + 1, 1, false)};
    RowMatrix init_wide = RowMatrix::Zero(1, kEleanorMaxFeatures + 1);
    CHECK_THROWS_AS(optimistic_plan(wide, init_wide, options(1, 1, 1, 1), rng), InvalidArgument);
  }
}
