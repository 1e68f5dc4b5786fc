#pragma once

#include <cstddef>
#include <memory>
#include <span>

#include "environments.hpp"
#include "legendre_features.hpp"

namespace smoothrl {

/// Feature map over state-action pairs, as consumed by the learners.
class StateActionFeatures {
 public:
  virtual ~StateActionFeatures() = default;
  virtual std::size_t length() const = 0;
  virtual void evaluate(const Vector& state, const Vector& action, std::span<double> out) const = 0;

  /// Row-major (grid.rows() x length()) block of features at a fixed state.
  void evaluate_grid(const Vector& state, const Matrix& grid, std::span<double> out) const;
  Vector evaluate(const Vector& state, const Vector& action) const;
};

/// Polynomial features of the concatenated point (state, action).
class PolynomialStateActionFeatures final : public StateActionFeatures {
 public:
  PolynomialStateActionFeatures(FeatureMap map, std::size_t state_dim, std::size_t action_dim);

  const FeatureMap& map() const { return map_; }
  std::size_t length() const override { return map_.length(); }
  void evaluate(const Vector& state, const Vector& action, std::span<double> out) const override;

 private:
  FeatureMap map_;
  std::size_t state_dim_;
  std::size_t action_dim_;
};

/// Indicator of (state index, action index) for tabular problems.
class OneHotFeatures final : public StateActionFeatures {
 public:
  OneHotFeatures(std::size_t num_states, std::size_t num_actions) : states_(num_states), actions_(num_actions) {}

  std::size_t length() const override { return states_ * actions_; }
  void evaluate(const Vector& state, const Vector& action, std::span<double> out) const override;

 private:
  std::size_t states_;
  std::size_t actions_;
};

}  // namespace smoothrl
