#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smoothrl {

enum class EnvironmentId { kLqrLeft, kLqrRight, kSyntheticSmooth };
enum class AlgorithmId { kLegendreLsvi, kMonomialLsvi, kLegendreEleanor };

std::string_view to_string(EnvironmentId id);
std::string_view to_string(AlgorithmId id);
std::optional<EnvironmentId> parse_environment(std::string_view name);
std::optional<AlgorithmId> parse_algorithm(std::string_view name);

/// One experiment file: the cross product environments x algorithms x
/// degrees x seeds, each run for `episodes` episodes.
struct ExperimentConfig {
  std::vector<EnvironmentId> environments;
  std::vector<AlgorithmId> algorithms;
  /// Empty means the degree is chosen from `episodes` and `smoothness`.
  std::vector<unsigned> degrees;
  unsigned smoothness = 1;
  std::size_t episodes = 500;
  std::vector<std::int64_t> seeds;
  std::uint64_t master_seed = 0;

  double c_beta = 1.0;
  double lambda = 1.0;
  double delta = 0.05;
  std::size_t action_points = 21;

  std::size_t eleanor_budget = 200;
  double eleanor_base = 2.0;
  double eleanor_slack = 1e-3;

  double noise_std = 0.1;
  double reward_noise_std = 0.0;
  /// 0 keeps each environment's own horizon.
  std::size_t horizon = 0;

  std::size_t smoothing_window = 0;
  bool regret = false;
  bool svg = false;
  std::string output_dir = "results";

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Parses `key = value` lines (UTF-8, `#` starts a comment). Unknown or
/// repeated keys are errors. List values are comma-separated.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::string& path);

}  // namespace smoothrl
