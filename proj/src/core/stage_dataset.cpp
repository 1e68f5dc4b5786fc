#include "stage_dataset.hpp"

#include <string>

#include "error.hpp"

namespace smoothrl {

void StageData::add(std::span<const double> features, double reward, std::span<const double> next_block) {
  if (features.size() != length_) throw InvalidArgument("stage data: feature length mismatch");
  if (has_next_ && next_block.size() != length_ * grid_size_)
    throw InvalidArgument("stage data: next-state block has the wrong size");
  features_.insert(features_.end(), features.begin(), features.end());
  rewards_.push_back(reward);
  if (has_next_) next_.insert(next_.end(), next_block.begin(), next_block.end());
}

EpisodeDataset::EpisodeDataset(std::size_t horizon, std::size_t feature_length, std::size_t grid_size) {
  if (horizon == 0) throw InvalidArgument("dataset: horizon must be positive");
  stages_.reserve(horizon);
  for (std::size_t h = 0; h < horizon; ++h) stages_.emplace_back(feature_length, grid_size, h + 1 < horizon);
}

void EpisodeDataset::add(const Transcript& transcript, const StateActionFeatures& features, const Matrix& grid) {
  const std::size_t H = horizon();
  if (transcript.steps.size() != H)
    throw InvalidArgument("dataset: transcript has " + std::to_string(transcript.steps.size()) +
                          " steps, expected " + std::to_string(H));
  const std::size_t len = features.length();
  const std::size_t g = static_cast<std::size_t>(grid.rows());
  std::vector<double> phi(len);
  scratch_.resize(len * g);
  for (std::size_t h = 0; h < H; ++h) {
    const auto& step = transcript.steps[h];
    features.evaluate(step.state, step.action, phi);
    if (h + 1 < H) {
      features.evaluate_grid(transcript.steps[h + 1].state, grid, scratch_);
      stages_[h].add(phi, step.reward, scratch_);
    } else {
      stages_[h].add(phi, step.reward, {});
    }
  }
  ++episodes_;
}

Vector group_max(const Vector& values, std::size_t group) {
  const auto n = static_cast<Eigen::Index>(values.size() / static_cast<Eigen::Index>(group));
  const auto gsz = static_cast<Eigen::Index>(group);
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = values.segment(i * gsz, gsz).maxCoeff();
  return out;
}

}  // namespace smoothrl
