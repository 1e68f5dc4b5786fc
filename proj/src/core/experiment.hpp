#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "environments.hpp"
#include "experiment_config.hpp"

namespace smoothrl {

struct RunKey {
  EnvironmentId environment;
  AlgorithmId algorithm;
  unsigned degree;
  std::int64_t seed;

  /// "env/algo/degree/seed", the label hashed into the run's stream key.
  std::string label() const;
};

struct ReturnRow {
  RunKey key;
  std::size_t episode;  // 1-based
  double value;
};

struct AggregateRow {
  EnvironmentId environment;
  AlgorithmId algorithm;
  unsigned degree;
  std::size_t episode;
  double mean;
  double ci_lo;
  double ci_hi;
};

struct FailedRun {
  RunKey key;
  std::size_t completed_episodes;
  std::string message;
};

struct RunRecord {
  std::vector<ReturnRow> rows;
  std::vector<AggregateRow> aggregate;
  std::vector<FailedRun> failures;
};

struct RunOptions {
  bool write_files = true;
  /// 0 reads SMOOTH_RL_THREADS, falling back to the hardware concurrency.
  std::size_t threads = 0;
};

std::unique_ptr<Environment> make_environment(EnvironmentId id, const ExperimentConfig& cfg);

/// Degrees actually run for an environment (explicit list or the auto rule
/// over the state-action dimension).
std::vector<unsigned> resolved_degrees(const ExperimentConfig& cfg, EnvironmentId env);
std::vector<RunKey> enumerate_runs(const ExperimentConfig& cfg);

/// Every run uses CounterRng streams keyed by
/// derive_stream(master_seed, key.label()) with "/env" and "/plan" suffixes
/// for environment noise and planner randomness. Raw returns are written to
/// <output_dir>/returns.csv before aggregation. A run that hits a numerical
/// error keeps its completed episodes and is listed in `failures`.
RunRecord run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Per-episode mean and mean +/- 1.96 s / sqrt(n) across seeds, for every
/// (environment, algorithm, degree). `window` > 0 applies a trailing moving
/// average to each seed's series first. Throws InvalidArgument when fewer
/// than two seeds are present.
std::vector<AggregateRow> aggregate(const std::vector<ReturnRow>& rows, std::size_t window = 0);

/// Partial sums of (oracle_value - return).
std::vector<double> regret_curve(const std::vector<double>& returns, double oracle_value);

/// Number of decreases in a cumulative regret series.
std::size_t regret_decreases(const std::vector<double>& regret);

std::string format_double(double v);
std::string returns_csv(const std::vector<ReturnRow>& rows);
std::string aggregate_csv(const std::vector<AggregateRow>& rows);
/// Canonical key = value rendering without output_dir; its FNV-1a hash goes
/// into the manifest.
std::string canonical_config_text(const ExperimentConfig& cfg);

/// Line plot of a returns or aggregate CSV (one panel per environment).
std::string render_svg(const std::string& csv_text);

std::size_t configured_threads();

}  // namespace smoothrl
