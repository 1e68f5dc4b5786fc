#ifndef SMOOTHRL_SMOOTHRL_H
#define SMOOTHRL_SMOOTHRL_H

#include <stddef.h>
#include <stdint.h>

#if defined(SMOOTHRL_BUILDING)
#define SRL_API __attribute__((visibility("default")))
#else
#define SRL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum srl_status {
  SRL_OK = 0,
  SRL_E_INVALID_ARGUMENT = 1,
  SRL_E_CONFIG = 2,
  SRL_E_NUMERICAL = 3,
  SRL_E_DOMAIN = 4,
  SRL_E_IO = 5,
  SRL_E_BUDGET = 6,
  SRL_E_INTERNAL = 99
} srl_status;

typedef enum srl_basis { SRL_BASIS_LEGENDRE = 0, SRL_BASIS_MONOMIAL = 1 } srl_basis;

/* Message of the last failed call on this thread ("" if none). */
SRL_API const char* srl_last_error(void);
SRL_API const char* srl_version(void);
/* Frees strings returned through char** out-parameters. */
SRL_API void srl_string_free(char* s);

/* Feature maps ---------------------------------------------------------- */

typedef struct srl_feature_map srl_feature_map;

SRL_API srl_status srl_feature_map_create(srl_basis kind, size_t dimension, unsigned degree, srl_feature_map** out);
SRL_API void srl_feature_map_destroy(srl_feature_map* map);
SRL_API size_t srl_feature_map_length(const srl_feature_map* map);
SRL_API double srl_feature_map_scale(const srl_feature_map* map);
/* x has `dimension` entries in [-1, 1]; out has room for `out_len` >= length. */
SRL_API srl_status srl_feature_map_eval(const srl_feature_map* map, const double* x, size_t dimension, double* out,
                                        size_t out_len);

/* sqrt((2n + 1) / 2) P_n(x). */
SRL_API srl_status srl_legendre_eval(unsigned n, double x, double* out);
/* Returns 0 for invalid input. */
SRL_API unsigned srl_choose_degree(uint64_t episodes, size_t dimension, unsigned smoothness);

/* Environments and LSVI-UCB --------------------------------------------- */

typedef struct srl_env srl_env;
typedef struct srl_lsvi srl_lsvi;

/* name: "lqr_left", "lqr_right" or "synthetic_smooth". */
SRL_API srl_status srl_env_create(const char* name, srl_env** out);
SRL_API void srl_env_destroy(srl_env* env);
SRL_API size_t srl_env_state_dim(const srl_env* env);
SRL_API size_t srl_env_action_dim(const srl_env* env);
SRL_API size_t srl_env_horizon(const srl_env* env);

/* Policy callback: write action_dim entries of the action for (stage, state). */
typedef int (*srl_policy_fn)(void* user, size_t stage, const double* state, size_t state_dim, double* action,
                             size_t action_dim);

/* Runs one episode under `policy` with noise stream `stream_key`. */
SRL_API srl_status srl_env_run_episode(const srl_env* env, srl_policy_fn policy, void* user, uint64_t stream_key,
                                       double* total_return);

typedef struct srl_lsvi_options {
  srl_basis basis;
  unsigned degree;
  double lambda;
  double c_beta;
  double delta;
  size_t planned_episodes;
  size_t action_points;
} srl_lsvi_options;

SRL_API void srl_lsvi_default_options(srl_lsvi_options* options);
SRL_API srl_status srl_lsvi_create(const srl_env* env, const srl_lsvi_options* options, srl_lsvi** out);
SRL_API void srl_lsvi_destroy(srl_lsvi* learner);
SRL_API srl_status srl_lsvi_q_value(const srl_lsvi* learner, size_t stage, const double* state, size_t state_dim,
                                    const double* action, size_t action_dim, double* out);
/* Acts greedily on the optimistic Q for one episode, then updates. */
SRL_API srl_status srl_lsvi_run_episode(srl_lsvi* learner, const srl_env* env, uint64_t stream_key,
                                        double* total_return);

/* Experiments ----------------------------------------------------------- */

typedef struct srl_experiment srl_experiment;

SRL_API srl_status srl_experiment_load(const char* path, srl_experiment** out);
SRL_API srl_status srl_experiment_parse(const char* text, srl_experiment** out);
SRL_API void srl_experiment_destroy(srl_experiment* exp);
SRL_API srl_status srl_experiment_set_output_dir(srl_experiment* exp, const char* dir);
/* Runs every (environment, algorithm, degree, seed) and writes the outputs. */
SRL_API srl_status srl_experiment_run(srl_experiment* exp);
SRL_API size_t srl_experiment_row_count(const srl_experiment* exp);
SRL_API size_t srl_experiment_failed_runs(const srl_experiment* exp);
SRL_API srl_status srl_experiment_returns_csv(const srl_experiment* exp, char** out);

/* Tools ----------------------------------------------------------------- */

/* Dynamic-programming estimate of V*(s_1) for an LQR environment; 0 for any
   grid size selects the default. */
SRL_API srl_status srl_dp_oracle(const char* env_name, size_t state_points, size_t action_points, double* value);
SRL_API srl_status srl_validate(const char* suite, char** report, int* passed);
SRL_API srl_status srl_plot(const char* csv_path, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif
