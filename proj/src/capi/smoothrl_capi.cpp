#include "smoothrl/smoothrl.h"

#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>

#include "dp_oracle.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "legendre_features.hpp"
#include "lsvi.hpp"
#include "rng.hpp"
#include "suites.hpp"

using namespace smoothrl;

struct srl_feature_map {
  FeatureMap map;
};

struct srl_env {
  std::unique_ptr<Environment> env;
};

struct srl_lsvi {
  std::unique_ptr<LsviLearner> learner;
  std::size_t episodes = 0;
};

struct srl_experiment {
  ExperimentConfig config;
  RunRecord record;
};

namespace {

thread_local std::string g_last_error;

srl_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return SRL_E_INVALID_ARGUMENT;
    case ErrorCode::kConfig: return SRL_E_CONFIG;
    case ErrorCode::kNumerical: return SRL_E_NUMERICAL;
    case ErrorCode::kDomain: return SRL_E_DOMAIN;
    case ErrorCode::kIo: return SRL_E_IO;
    case ErrorCode::kBudgetExhausted: return SRL_E_BUDGET;
    default: return SRL_E_INTERNAL;
  }
}

template <class F>
srl_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return SRL_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SRL_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SRL_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

EnvironmentId env_id(const char* name) {
  require(name != nullptr, "environment name is null");
  auto id = parse_environment(name);
  if (!id) throw ConfigError(std::string("unknown environment '") + name + "'");
  return *id;
}

Vector to_vector(const double* p, std::size_t n) {
  return n ? Eigen::Map<const Vector>(p, static_cast<Eigen::Index>(n)) : Vector();
}

}  // namespace

extern "C" {

const char* srl_last_error(void) { return g_last_error.c_str(); }
const char* srl_version(void) { return "0.1.0"; }
void srl_string_free(char* s) { std::free(s); }

srl_status srl_feature_map_create(srl_basis kind, size_t dimension, unsigned degree, srl_feature_map** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(kind == SRL_BASIS_LEGENDRE || kind == SRL_BASIS_MONOMIAL, "unknown basis");
    const BasisKind k = kind == SRL_BASIS_LEGENDRE ? BasisKind::kLegendreOrthonormal : BasisKind::kMonomialNaive;
    *out = new srl_feature_map{FeatureMap(k, dimension, degree)};
  });
}

void srl_feature_map_destroy(srl_feature_map* map) { delete map; }
size_t srl_feature_map_length(const srl_feature_map* map) { return map ? map->map.length() : 0; }
double srl_feature_map_scale(const srl_feature_map* map) { return map ? map->map.scale() : 0.0; }

srl_status srl_feature_map_eval(const srl_feature_map* map, const double* x, size_t dimension, double* out,
                                size_t out_len) {
  return guarded([&] {
    require(map && x && out, "null argument");
    require(dimension == map->map.dimension(), "dimension mismatch");
    require(out_len >= map->map.length(), "output buffer too small");
    map->map.evaluate({x, dimension}, {out, map->map.length()});
  });
}

srl_status srl_legendre_eval(unsigned n, double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = legendre_normalized(n, x);
  });
}

unsigned srl_choose_degree(uint64_t episodes, size_t dimension, unsigned smoothness) {
  unsigned n = 0;
  guarded([&] { n = choose_degree(episodes, dimension, smoothness); });
  return n;
}

srl_status srl_env_create(const char* name, srl_env** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    ExperimentConfig defaults;
    *out = new srl_env{make_environment(env_id(name), defaults)};
  });
}

void srl_env_destroy(srl_env* env) { delete env; }
size_t srl_env_state_dim(const srl_env* env) { return env ? env->env->state_dim() : 0; }
size_t srl_env_action_dim(const srl_env* env) { return env ? env->env->action_dim() : 0; }
size_t srl_env_horizon(const srl_env* env) { return env ? env->env->horizon() : 0; }

srl_status srl_env_run_episode(const srl_env* env, srl_policy_fn policy, void* user, uint64_t stream_key,
                               double* total_return) {
  return guarded([&] {
    require(env && policy && total_return, "null argument");
    const std::size_t ad = env->env->action_dim();
    CounterRng rng(stream_key);
    const Transcript tr = run_episode(
        *env->env,
        [&](std::size_t h, const Vector& s) {
          Vector a(static_cast<Eigen::Index>(ad));
          if (policy(user, h, s.data(), static_cast<size_t>(s.size()), a.data(), ad) != 0)
            throw InvalidArgument("policy callback reported failure");
          return a;
        },
        rng);
    *total_return = tr.total_return();
  });
}

void srl_lsvi_default_options(srl_lsvi_options* o) {
  if (!o) return;
  o->basis = SRL_BASIS_LEGENDRE;
  o->degree = 3;
  o->lambda = 1.0;
  o->c_beta = 1.0;
  o->delta = 0.05;
  o->planned_episodes = 500;
  o->action_points = 21;
}

srl_status srl_lsvi_create(const srl_env* env, const srl_lsvi_options* o, srl_lsvi** out) {
  return guarded([&] {
    require(env && o && out, "null argument");
    require(o->basis == SRL_BASIS_LEGENDRE || o->basis == SRL_BASIS_MONOMIAL, "unknown basis");
    require(o->lambda > 0.0 && o->c_beta >= 0.0 && o->delta > 0.0 && o->delta < 1.0, "invalid LSVI options");
    require(o->planned_episodes >= 1 && o->action_points >= 1, "invalid LSVI options");
    const Environment& e = *env->env;
    const BasisKind k = o->basis == SRL_BASIS_LEGENDRE ? BasisKind::kLegendreOrthonormal : BasisKind::kMonomialNaive;
    auto features = std::make_shared<PolynomialStateActionFeatures>(
        FeatureMap(k, e.state_dim() + e.action_dim(), o->degree), e.state_dim(), e.action_dim());
    LsviConfig cfg;
    cfg.lambda = o->lambda;
    cfg.beta = default_bonus_scale(features->length(), o->planned_episodes, e.horizon(), o->c_beta, o->delta);
    cfg.values = value_range_for(e);
    auto learner = std::make_unique<LsviLearner>(std::move(features), e.horizon(),
                                                 uniform_action_grid(e.action_dim(), o->action_points), cfg);
    *out = new srl_lsvi{std::move(learner), 0};
  });
}

void srl_lsvi_destroy(srl_lsvi* learner) { delete learner; }

srl_status srl_lsvi_q_value(const srl_lsvi* l, size_t stage, const double* state, size_t state_dim,
                            const double* action, size_t action_dim, double* out) {
  return guarded([&] {
    require(l && state && action && out, "null argument");
    require(stage < l->learner->horizon(), "stage out of range");
    *out = l->learner->q_value(stage, to_vector(state, state_dim), to_vector(action, action_dim));
  });
}

srl_status srl_lsvi_run_episode(srl_lsvi* l, const srl_env* env, uint64_t stream_key, double* total_return) {
  return guarded([&] {
    require(l && env && total_return, "null argument");
    require(l->learner->horizon() == env->env->horizon(), "learner and environment horizons differ");
    CounterRng rng(stream_key);
    const Transcript tr = run_episode(
        *env->env, [&](std::size_t h, const Vector& s) { return l->learner->select_action(h, s); }, rng,
        l->episodes);
    l->learner->update(tr);
    ++l->episodes;
    *total_return = tr.total_return();
  });
}

srl_status srl_experiment_load(const char* path, srl_experiment** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new srl_experiment{load_experiment_config(path), {}};
  });
}

srl_status srl_experiment_parse(const char* text, srl_experiment** out) {
  return guarded([&] {
    require(text && out, "null argument");
    *out = new srl_experiment{parse_experiment_config(text), {}};
  });
}

void srl_experiment_destroy(srl_experiment* exp) { delete exp; }

srl_status srl_experiment_set_output_dir(srl_experiment* exp, const char* dir) {
  return guarded([&] {
    require(exp && dir && *dir, "null or empty argument");
    exp->config.output_dir = dir;
  });
}

srl_status srl_experiment_run(srl_experiment* exp) {
  return guarded([&] {
    require(exp != nullptr, "null argument");
    exp->record = run_experiment(exp->config);
    if (!exp->record.failures.empty()) {
      const auto& f = exp->record.failures.front();
      throw NumericalError(std::to_string(exp->record.failures.size()) + " run(s) failed; first " + f.key.label() +
                           " after " + std::to_string(f.completed_episodes) + " episodes: " + f.message);
    }
  });
}

size_t srl_experiment_row_count(const srl_experiment* exp) { return exp ? exp->record.rows.size() : 0; }
size_t srl_experiment_failed_runs(const srl_experiment* exp) { return exp ? exp->record.failures.size() : 0; }

srl_status srl_experiment_returns_csv(const srl_experiment* exp, char** out) {
  return guarded([&] {
    require(exp && out, "null argument");
    *out = dup_string(returns_csv(exp->record.rows));
  });
}

srl_status srl_dp_oracle(const char* env_name, size_t state_points, size_t action_points, double* value) {
  return guarded([&] {
    require(value != nullptr, "value is null");
    const EnvironmentId id = env_id(env_name);
    if (id == EnvironmentId::kSyntheticSmooth) throw ConfigError("oracle: only LQR environments have a DP oracle");
    ExperimentConfig defaults;
    const auto env = make_environment(id, defaults);
    DpOracleOptions opts;
    if (state_points) opts.state_points = state_points;
    if (action_points) opts.action_points = action_points;
    *value = dp_oracle(dynamic_cast<const SquashedLqr&>(*env).config(), opts);
  });
}

srl_status srl_validate(const char* suite, char** report, int* passed) {
  return guarded([&] {
    require(suite && report && passed, "null argument");
    const SuiteResult r = run_suite(suite);
    *report = dup_string(r.report);
    *passed = r.passed ? 1 : 0;
  });
}

srl_status srl_plot(const char* csv_path, const char* svg_path) {
  return guarded([&] {
    require(csv_path && svg_path, "null argument");
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw IoError(std::string("cannot open '") + csv_path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string svg = render_svg(text);
    std::ofstream o(svg_path, std::ios::binary);
    if (!o || !(o << svg)) throw IoError(std::string("cannot write '") + svg_path + "'");
  });
}

}  // extern "C"
