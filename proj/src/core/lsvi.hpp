#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "environments.hpp"
#include "stage_dataset.hpp"
#include "state_action_features.hpp"

namespace smoothrl {

/// Smallest n with n^(d + 2(nu + 1)) >= episodes, i.e. ceil(K^{1/(d+2(nu+1))})
/// computed in integers.
unsigned choose_degree(std::uint64_t episodes, std::size_t dimension, unsigned smoothness);

/// c_beta * sqrt(length * log(2 * length * episodes * horizon / delta)).
double default_bonus_scale(std::size_t feature_length, std::size_t episodes, std::size_t horizon, double c_beta = 1.0,
                           double delta = 0.05);

struct ValueRange {
  double lo;
  double hi;
};

/// [-H * reward_bound, 0] for non-positive rewards, symmetric otherwise.
ValueRange value_range_for(const Environment& env);

struct LsviConfig {
  double lambda = 1.0;
  double beta = 1.0;
  ValueRange values{-1.0, 1.0};
};

/// Optimistic least-squares value iteration over an arbitrary feature map.
///
/// Gram inverses are maintained by Sherman-Morrison updates; the weights of
/// every stage are re-solved against all data after each episode because
/// the regression targets move with the next stage's estimate.
class LsviLearner {
 public:
  LsviLearner(std::shared_ptr<const StateActionFeatures> features, std::size_t horizon, Matrix action_grid,
              LsviConfig config);

  std::size_t horizon() const { return stages_.size(); }
  std::size_t feature_length() const { return length_; }
  const Matrix& action_grid() const { return grid_; }
  const LsviConfig& config() const { return config_; }
  std::size_t episodes_seen() const { return data_.episodes(); }

  const Matrix& gram(std::size_t stage) const { return stages_.at(stage).gram; }
  const Matrix& gram_inverse(std::size_t stage) const { return stages_.at(stage).gram_inverse; }
  const Vector& weights(std::size_t stage) const { return stages_.at(stage).weights; }
  const EpisodeDataset& dataset() const { return data_; }

  /// clip(w'phi + beta * sqrt(phi' Lambda^{-1} phi), lo, hi)
  double q_value(std::size_t stage, const Vector& state, const Vector& action) const;
  double bonus(std::size_t stage, const Vector& state, const Vector& action) const;
  Vector q_values(std::size_t stage, const Vector& state, const Matrix& grid) const;

  /// Index of the grid row maximizing q_value; lowest index on ties.
  std::size_t select_action_index(std::size_t stage, const Vector& state, const Matrix& grid) const;
  std::size_t select_action_index(std::size_t stage, const Vector& state) const {
    return select_action_index(stage, state, grid_);
  }
  Vector select_action(std::size_t stage, const Vector& state) const {
    return grid_.row(static_cast<Eigen::Index>(select_action_index(stage, state))).transpose();
  }

  void update(const Transcript& transcript);

 private:
  struct Stage {
    Matrix gram;
    Matrix gram_inverse;
    Vector weights;
  };

  Vector q_from_features(std::size_t stage, const Eigen::Ref<const RowMatrix>& phi) const;

  std::shared_ptr<const StateActionFeatures> features_;
  std::size_t length_;
  Matrix grid_;
  LsviConfig config_;
  std::vector<Stage> stages_;
  EpisodeDataset data_;
};

/// Index of the first maximal entry.
std::size_t first_argmax(const Vector& values);

}  // namespace smoothrl
