#include "state_action_features.hpp"

#include <algorithm>
#include <string>

#include "error.hpp"

namespace smoothrl {

void StateActionFeatures::evaluate_grid(const Vector& state, const Matrix& grid, std::span<double> out) const {
  const std::size_t len = length();
  if (out.size() != static_cast<std::size_t>(grid.rows()) * len)
    throw InvalidArgument("evaluate_grid: output block has the wrong size");
  Vector action(grid.cols());
  for (Eigen::Index r = 0; r < grid.rows(); ++r) {
    action = grid.row(r).transpose();
    evaluate(state, action, out.subspan(static_cast<std::size_t>(r) * len, len));
  }
}

Vector StateActionFeatures::evaluate(const Vector& state, const Vector& action) const {
  Vector out(static_cast<Eigen::Index>(length()));
  evaluate(state, action, std::span<double>(out.data(), length()));
  return out;
}

PolynomialStateActionFeatures::PolynomialStateActionFeatures(FeatureMap map, std::size_t state_dim,
                                                             std::size_t action_dim)
    : map_(std::move(map)), state_dim_(state_dim), action_dim_(action_dim) {
  if (map_.dimension() != state_dim + action_dim)
    throw InvalidArgument("state-action features: map dimension " + std::to_string(map_.dimension()) +
                          " != state_dim + action_dim");
}

void PolynomialStateActionFeatures::evaluate(const Vector& state, const Vector& action, std::span<double> out) const {
  if (static_cast<std::size_t>(state.size()) != state_dim_ || static_cast<std::size_t>(action.size()) != action_dim_)
    throw InvalidArgument("state-action features: dimension mismatch");
  double point[16];
  std::vector<double> heap;
  double* x = point;
  if (state_dim_ + action_dim_ > std::size(point)) {
    heap.resize(state_dim_ + action_dim_);
    x = heap.data();
  }
  std::copy(state.data(), state.data() + state_dim_, x);
  std::copy(action.data(), action.data() + action_dim_, x + state_dim_);
  map_.evaluate(std::span<const double>(x, state_dim_ + action_dim_), out);
}

void OneHotFeatures::evaluate(const Vector& state, const Vector& action, std::span<double> out) const {
  if (out.size() != length()) throw InvalidArgument("one-hot features: output has the wrong size");
  const auto s = static_cast<std::size_t>(state(0));
  const auto a = static_cast<std::size_t>(action(0));
  if (s >= states_ || a >= actions_) throw InvalidArgument("one-hot features: index out of range");
  std::fill(out.begin(), out.end(), 0.0);
  out[s * actions_ + a] = 1.0;
}

}  // namespace smoothrl
