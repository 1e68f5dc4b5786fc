#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dp_oracle.hpp"
#include "environments.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "experiment_config.hpp"
#include "lsvi.hpp"

using namespace smoothrl;

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("smoothrl_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

ReturnRow row(std::int64_t seed, std::size_t episode, double v) {
  return {{EnvironmentId::kLqrLeft, AlgorithmId::kLegendreLsvi, 3, seed}, episode, v};
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("parses the full grammar") {
    const auto cfg = parse_experiment_config(R"(# comment
environment = lqr_left, lqr_right   # trailing comment
algorithm = legendre_lsvi,monomial_lsvi
degree = 3, 4
episodes = 500
seeds = 1, 2, 3, 4, 5
c_beta = 0.03
lambda = 0.01

regret = true
output_dir = out
)");
    CHECK(cfg.environments.size() == 2);
    CHECK(cfg.algorithms[1] == AlgorithmId::kMonomialLsvi);
    CHECK(cfg.degrees == std::vector<unsigned>{3, 4});
    CHECK(cfg.seeds.size() == 5);
    CHECK(cfg.c_beta == 0.03);
    CHECK(cfg.regret);
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.delta == 0.05);
  }

  TEST_CASE("auto degree") {
    const auto cfg = parse_experiment_config("environment = lqr_left\nalgorithm = legendre_lsvi\ndegree = auto\n"
                                             "nu = 0\nepisodes = 1000\nseeds = 1\n");
    CHECK(cfg.degrees.empty());
    CHECK(resolved_degrees(cfg, EnvironmentId::kLqrLeft) == std::vector<unsigned>{choose_degree(1000, 3, 0)});
  }

  TEST_CASE("rejects malformed input") {
    const std::string base = "environment = lqr_left\nalgorithm = legendre_lsvi\nseeds = 1\n";
    CHECK_THROWS_AS(parse_experiment_config(base + "colour = red\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(base + "seeds = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(base + "episodes = -3\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(base + "episodes = 12x\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(base + "lambda = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(base + "just words\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("environment = mars\nalgorithm = legendre_lsvi\nseeds = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config("environment = lqr_left\nalgorithm = legendre_lsvi\n"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_config(base + "seeds_extra = 1\n"), ConfigError);
    CHECK_THROWS_AS(load_experiment_config("/nonexistent/path.conf"), ConfigError);
  }

  TEST_CASE("Eleanor guard is a configuration error") {
    const auto cfg = parse_experiment_config(
        "environment = lqr_left\nalgorithm = legendre_eleanor\ndegree = 3\nseeds = 1\nepisodes = 2\n");
    CHECK_THROWS_AS(enumerate_runs(cfg), ConfigError);
  }
}

TEST_SUITE("harness") {
  TEST_CASE("aggregate statistics") {
    const auto agg = aggregate({row(1, 1, 1.0), row(2, 1, 2.0), row(3, 1, 3.0)});
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].mean == doctest::Approx(2.0));
    CHECK(agg[0].ci_hi - agg[0].mean == doctest::Approx(1.96 / std::sqrt(3.0)));
    CHECK(agg[0].ci_hi - agg[0].mean == doctest::Approx(1.1316).epsilon(1e-4));
    CHECK(agg[0].mean - agg[0].ci_lo == doctest::Approx(1.1316).epsilon(1e-4));

    const auto flat = aggregate({row(1, 1, 0.5), row(2, 1, 0.5), row(3, 1, 0.5)});
    CHECK(flat[0].ci_hi == flat[0].ci_lo);

    CHECK_THROWS_AS(aggregate({row(1, 1, 1.0), row(1, 2, 2.0)}), InvalidArgument);
  }

  TEST_CASE("smoothing window") {
    std::vector<ReturnRow> rows;
    for (std::int64_t seed : {1, 2})
      for (std::size_t k = 1; k <= 4; ++k) rows.push_back(row(seed, k, static_cast<double>(k)));
    const auto agg = aggregate(rows, 2);
    REQUIRE(agg.size() == 4);
    CHECK(agg[0].mean == 1.0);
    CHECK(agg[1].mean == 1.5);
    CHECK(agg[3].mean == 3.5);
  }

  TEST_CASE("regret curves") {
    const std::vector<double> at_oracle(5, -0.4);
    for (double r : regret_curve(at_oracle, -0.4)) CHECK(r == 0.0);
    const auto ramp = regret_curve(std::vector<double>(6, -1.4), -0.4);
    for (std::size_t k = 0; k < ramp.size(); ++k) CHECK(ramp[k] == doctest::Approx(double(k + 1)));
    CHECK(regret_decreases(ramp) == 0);
    CHECK(regret_decreases({1.0, 2.0, 1.5}) == 1);
  }

  TEST_CASE("DP oracle") {
    SquashedLqrConfig c = reference_lqr_environments().first;
    c.A.setZero();
    c.B.setZero();
    c.noise_std = 0.0;
    CHECK(std::abs(dp_oracle(c)) < 1e-12);

    // H = 1 is a static choice: V = max_a -(s'Qs + 0.2 a^2) at s = (0.3, 0) is -0.09.
    c = reference_lqr_environments().first;
    c.horizon = 1;
    c.initial_state = (Vector(2) << 0.3, 0.0).finished();
    CHECK(dp_oracle(c) == doctest::Approx(-0.09).epsilon(1e-12));

    const double v = dp_oracle(reference_lqr_environments().first);
    CHECK(v < 0.0);
    CHECK(v > -20 * 2.2);
  }

  TEST_CASE("csv formatting round-trips") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5e-7) == "-2.5e-07");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    const std::string csv = returns_csv({row(7, 1, -0.5)});
    CHECK(csv == "env,algo,degree,seed,episode,return\nlqr_left,legendre_lsvi,3,7,1,-0.5\n");
  }

  TEST_CASE("one episode, one seed gives one row per algorithm") {
    auto cfg = parse_experiment_config(
        "environment = lqr_left\nalgorithm = legendre_lsvi, monomial_lsvi\ndegree = 2\nepisodes = 1\nseeds = 3\n");
    cfg.output_dir = temp_dir("single").string();
    const RunRecord rec = run_experiment(cfg);
    CHECK(rec.rows.size() == 2);
    CHECK(rec.aggregate.empty());
    CHECK(std::filesystem::exists(std::filesystem::path(cfg.output_dir) / "returns.csv"));
    CHECK(read_file(std::filesystem::path(cfg.output_dir) / "manifest.txt").find("aggregate=skipped") !=
          std::string::npos);
  }

  TEST_CASE("noiseless runs agree across seeds") {
    auto cfg = parse_experiment_config(
        "environment = lqr_right\nalgorithm = legendre_lsvi\ndegree = 2\nepisodes = 8\nseeds = 1,2,3,4,5\n"
        "noise_std = 0\nreward_noise_std = 0\nhorizon = 5\nc_beta = 0.05\n");
    RunOptions opts;
    opts.write_files = false;
    const RunRecord rec = run_experiment(cfg, opts);
    REQUIRE(rec.aggregate.size() == 8);
    for (const auto& a : rec.aggregate) CHECK(a.ci_hi == a.ci_lo);
  }

  TEST_CASE("outputs are byte-identical across reruns and thread counts") {
    const std::string text =
        "environment = lqr_left, synthetic_smooth\nalgorithm = legendre_lsvi, monomial_lsvi\ndegree = 2\n"
        "episodes = 6\nseeds = 1, 2\nhorizon = 4\nregret = true\nsvg = true\n";
    auto a = parse_experiment_config(text), b = a;
    a.output_dir = temp_dir("det_a").string();
    b.output_dir = temp_dir("det_b").string();
    RunOptions one, many;
    one.threads = 1;
    many.threads = 3;
    run_experiment(a, one);
    run_experiment(b, many);
    for (const char* f : {"returns.csv", "aggregate.csv", "regret.csv", "manifest.txt", "returns.svg"}) {
      const auto fa = read_file(std::filesystem::path(a.output_dir) / f);
      CHECK(!fa.empty());
      CHECK(fa == read_file(std::filesystem::path(b.output_dir) / f));
    }
  }

  TEST_CASE("Eleanor runs on the synthetic MDP") {
    auto cfg = parse_experiment_config(
        "environment = synthetic_smooth\nalgorithm = legendre_eleanor\ndegree = 2\nepisodes = 5\nseeds = 1, 2\n"
        "eleanor_budget = 30\naction_grid = 5\n");
    RunOptions opts;
    opts.write_files = false;
    const RunRecord rec = run_experiment(cfg, opts);
    CHECK(rec.rows.size() == 10);
    CHECK(rec.failures.empty());
  }

  TEST_CASE("svg rendering") {
    const std::string svg = render_svg("env,algo,degree,episode,mean,ci_lo,ci_hi\nlqr_left,legendre_lsvi,3,1,-1,-1.5,-0.5\n"
                                       "lqr_left,legendre_lsvi,3,2,-0.8,-1,-0.6\n");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("legendre_lsvi N=3") != std::string::npos);
    CHECK_THROWS_AS(render_svg("a,b\n1,2\n"), InvalidArgument);
    CHECK_THROWS_AS(render_svg("env,algo,degree,seed,episode,return\nlqr_left,x,3\n"), InvalidArgument);
  }
}
