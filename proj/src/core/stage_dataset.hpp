#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "environments.hpp"
#include "state_action_features.hpp"

namespace smoothrl {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

/// Transitions observed at one stage, stored as cached features.
///
/// For transition t: features row t is phi(s_t, a_t); rows
/// [t * grid_size, (t+1) * grid_size) of the next-state block hold
/// phi(s'_t, b) for every candidate action b. The last stage of an episode
/// carries no next-state block.
class StageData {
 public:
  StageData(std::size_t feature_length, std::size_t grid_size, bool has_next)
      : length_(feature_length), grid_size_(grid_size), has_next_(has_next) {}

  std::size_t count() const { return rewards_.size(); }
  std::size_t feature_length() const { return length_; }
  std::size_t grid_size() const { return grid_size_; }
  bool has_next() const { return has_next_; }

  void add(std::span<const double> features, double reward, std::span<const double> next_block);

  ConstRowMap features() const {
    return {features_.data(), static_cast<Eigen::Index>(count()), static_cast<Eigen::Index>(length_)};
  }
  ConstRowMap next_features() const {
    return {next_.data(), static_cast<Eigen::Index>(has_next_ ? count() * grid_size_ : 0),
            static_cast<Eigen::Index>(length_)};
  }
  Eigen::Map<const Vector> rewards() const { return {rewards_.data(), static_cast<Eigen::Index>(count())}; }

 private:
  std::size_t length_;
  std::size_t grid_size_;
  bool has_next_;
  std::vector<double> features_;
  std::vector<double> rewards_;
  std::vector<double> next_;
};

/// One StageData per stage, fed from transcripts.
class EpisodeDataset {
 public:
  EpisodeDataset(std::size_t horizon, std::size_t feature_length, std::size_t grid_size);

  std::size_t horizon() const { return stages_.size(); }
  const StageData& stage(std::size_t h) const { return stages_.at(h); }
  const std::vector<StageData>& stages() const { return stages_; }
  std::size_t episodes() const { return episodes_; }

  void add(const Transcript& transcript, const StateActionFeatures& features, const Matrix& grid);

 private:
  std::vector<StageData> stages_;
  std::size_t episodes_ = 0;
  std::vector<double> scratch_;
};

/// Largest entry of each consecutive group of `group` values.
Vector group_max(const Vector& values, std::size_t group);

}  // namespace smoothrl
