#include "lsvi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace smoothrl {

namespace {

// base^exp, saturating at `limit`.
std::uint64_t saturating_pow(std::uint64_t base, unsigned exp, std::uint64_t limit) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (result > limit / base) return limit;
    result *= base;
  }
  return result;
}

}  // namespace

unsigned choose_degree(std::uint64_t episodes, std::size_t dimension, unsigned smoothness) {
  if (episodes == 0) throw InvalidArgument("choose_degree: episodes must be positive");
  const auto exponent = static_cast<unsigned>(dimension + 2 * (smoothness + 1));
  const double guess = std::pow(static_cast<double>(episodes), 1.0 / exponent);
  auto n = static_cast<std::uint64_t>(std::max(1.0, std::floor(guess) - 1.0));
  while (saturating_pow(n, exponent, episodes) < episodes) ++n;
  return static_cast<unsigned>(n);
}

double default_bonus_scale(std::size_t feature_length, std::size_t episodes, std::size_t horizon, double c_beta,
                           double delta) {
  const double n = static_cast<double>(feature_length);
  const double arg = 2.0 * n * static_cast<double>(episodes) * static_cast<double>(horizon) / delta;
  return c_beta * std::sqrt(n * std::log(arg));
}

ValueRange value_range_for(const Environment& env) {
  const double vmax = static_cast<double>(env.horizon()) * env.reward_bound();
  if (env.rewards_nonpositive()) return {-vmax, 0.0};
  return {-vmax, vmax};
}

std::size_t first_argmax(const Vector& values) {
  if (values.size() == 0) throw InvalidArgument("argmax over an empty grid");
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values(i) > values(best)) best = i;
  return static_cast<std::size_t>(best);
}

LsviLearner::LsviLearner(std::shared_ptr<const StateActionFeatures> features, std::size_t horizon, Matrix action_grid,
                         LsviConfig config)
    : features_(std::move(features)),
      length_(features_ ? features_->length() : 0),
      grid_(std::move(action_grid)),
      config_(config),
      data_(horizon, length_, static_cast<std::size_t>(grid_.rows())) {
  if (!features_) throw InvalidArgument("lsvi: feature map is required");
  if (grid_.rows() == 0) throw InvalidArgument("lsvi: empty action grid");
  if (!(config_.lambda > 0.0)) throw InvalidArgument("lsvi: lambda must be positive");
  if (config_.beta < 0.0) throw InvalidArgument("lsvi: beta must be non-negative");
  if (!(config_.values.lo <= config_.values.hi)) throw InvalidArgument("lsvi: empty value range");
  const auto n = static_cast<Eigen::Index>(length_);
  stages_.resize(horizon);
  for (auto& st : stages_) {
    st.gram = config_.lambda * Matrix::Identity(n, n);
    st.gram_inverse = (1.0 / config_.lambda) * Matrix::Identity(n, n);
    st.weights = Vector::Zero(n);
  }
}

Vector LsviLearner::q_from_features(std::size_t stage, const Eigen::Ref<const RowMatrix>& phi) const {
  const Stage& st = stages_[stage];
  Vector q = phi * st.weights;
  if (config_.beta > 0.0) {
    const RowMatrix projected = phi * st.gram_inverse;
    const Vector quad = projected.cwiseProduct(phi).rowwise().sum();
    q += config_.beta * quad.cwiseMax(0.0).cwiseSqrt();
  }
  return q.cwiseMax(config_.values.lo).cwiseMin(config_.values.hi);
}

double LsviLearner::bonus(std::size_t stage, const Vector& state, const Vector& action) const {
  const Vector phi = features_->evaluate(state, action);
  const double quad = phi.dot(stages_.at(stage).gram_inverse * phi);
  return config_.beta * std::sqrt(std::max(0.0, quad));
}

double LsviLearner::q_value(std::size_t stage, const Vector& state, const Vector& action) const {
  const Vector phi = features_->evaluate(state, action);
  const double raw = stages_.at(stage).weights.dot(phi) + bonus(stage, state, action);
  return std::clamp(raw, config_.values.lo, config_.values.hi);
}

Vector LsviLearner::q_values(std::size_t stage, const Vector& state, const Matrix& grid) const {
  if (stage >= horizon()) throw InvalidArgument("lsvi: stage out of range");
  RowMatrix phi(grid.rows(), static_cast<Eigen::Index>(length_));
  features_->evaluate_grid(state, grid, std::span<double>(phi.data(), static_cast<std::size_t>(phi.size())));
  return q_from_features(stage, phi);
}

std::size_t LsviLearner::select_action_index(std::size_t stage, const Vector& state, const Matrix& grid) const {
  if (grid.rows() == 0) throw InvalidArgument("lsvi: empty action grid");
  return first_argmax(q_values(stage, state, grid));
}

void LsviLearner::update(const Transcript& transcript) {
  data_.add(transcript, *features_, grid_);
  const std::size_t H = horizon();
  for (std::size_t h = 0; h < H; ++h) {
    Stage& st = stages_[h];
    const StageData& sd = data_.stage(h);
    const Vector phi = sd.features().row(static_cast<Eigen::Index>(sd.count() - 1)).transpose();
    const Vector u = st.gram_inverse * phi;
    const double denom = 1.0 + phi.dot(u);
    if (!(denom > 0.0) || !std::isfinite(denom))
      throw NumericalError("lsvi: gram matrix lost positive definiteness at stage " + std::to_string(h));
    st.gram.noalias() += phi * phi.transpose();
    st.gram_inverse.noalias() -= (u * u.transpose()) / denom;
    st.gram_inverse = 0.5 * (st.gram_inverse + st.gram_inverse.transpose()).eval();
  }
  const auto grid_size = static_cast<std::size_t>(grid_.rows());
  for (std::size_t h = H; h-- > 0;) {
    const StageData& sd = data_.stage(h);
    Vector targets = sd.rewards();
    if (sd.has_next()) targets += group_max(q_from_features(h + 1, sd.next_features()), grid_size);
    Stage& st = stages_[h];
    st.weights = st.gram_inverse * (sd.features().transpose() * targets);
    if (!st.weights.allFinite()) throw NumericalError("lsvi: non-finite weights at stage " + std::to_string(h));
  }
}

}  // namespace smoothrl
