#include "eleanor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"
#include "lsvi.hpp"

namespace smoothrl {

RadiusSchedule confidence_radii(std::size_t horizon, double base) {
  if (horizon == 0) throw InvalidArgument("confidence_radii: horizon must be positive");
  if (!(base > 1.0)) throw InvalidArgument("confidence_radii: base must exceed 1");
  RadiusSchedule schedule{base, horizon, std::vector<double>(horizon, 0.0)};
  // direct summation of base^1 + ... + base^{H-1-h}
  for (std::size_t h = 0; h < horizon; ++h) {
    double term = 1.0, sum = 0.0;
    for (std::size_t tau = 1; tau + h < horizon; ++tau) {
      term *= base;
      sum += term;
    }
    schedule.values[h] = sum;
  }
  return schedule;
}

std::vector<double> norm_caps_from_schedule(const RadiusSchedule& schedule, std::size_t feature_length,
                                            double feature_scale, double domain_volume) {
  if (!(feature_scale > 0.0) || !(domain_volume > 0.0))
    throw InvalidArgument("norm caps: scale and volume must be positive");
  const double factor = std::sqrt(domain_volume * static_cast<double>(feature_length)) / feature_scale;
  std::vector<double> caps(schedule.values.size());
  for (std::size_t h = 0; h < caps.size(); ++h) caps[h] = factor * (schedule.values[h] + 1.0);
  return caps;
}

namespace {

struct StageGeometry {
  Matrix gram;
  Matrix solve_targets;  // Lambda^{-1} Phi^T
  Matrix inv_chol;       // L^{-1}
};

struct Candidate {
  std::vector<Vector> u;
  std::vector<Vector> thetas;
  double value = -std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
};

class Planner {
 public:
  Planner(std::span<const StageData> stages, const Eigen::Ref<const RowMatrix>& initial, const EleanorOptions& opts)
      : stages_(stages), initial_(initial), opts_(opts) {
    const std::size_t H = stages.size();
    if (H == 0) throw InvalidArgument("eleanor: empty horizon");
    if (H > kEleanorMaxHorizon) throw InvalidArgument("eleanor: horizon exceeds desk-scale limit");
    length_ = stages.front().feature_length();
    if (length_ > kEleanorMaxFeatures) throw InvalidArgument("eleanor: feature length exceeds desk-scale limit");
    if (static_cast<std::size_t>(initial.cols()) != length_ || initial.rows() == 0)
      throw InvalidArgument("eleanor: initial action features have the wrong shape");
    if (opts.ridge_radius.size() != H || opts.norm_caps.size() != H)
      throw InvalidArgument("eleanor: need one ridge radius and one norm cap per stage");
    if (!(opts.lambda > 0.0)) throw InvalidArgument("eleanor: lambda must be positive");
    const auto n = static_cast<Eigen::Index>(length_);
    geometry_.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
      const StageData& sd = stages[h];
      if (sd.feature_length() != length_) throw InvalidArgument("eleanor: inconsistent feature length");
      if (h + 1 < H && !sd.has_next()) throw InvalidArgument("eleanor: stage is missing next-state features");
      if (opts.ridge_radius[h] < 0.0 || opts.norm_caps[h] < 0.0)
        throw InvalidArgument("eleanor: radii and caps must be non-negative");
      StageGeometry& g = geometry_[h];
      g.gram = opts.lambda * Matrix::Identity(n, n);
      if (sd.count() > 0) g.gram.noalias() += sd.features().transpose() * sd.features();
      Eigen::LLT<Matrix> llt(g.gram);
      if (llt.info() != Eigen::Success) throw NumericalError("eleanor: stage gram is not positive definite");
      g.solve_targets = llt.solve(Matrix(sd.features().transpose()));
      g.inv_chol = llt.matrixL().solve(Matrix::Identity(n, n));
    }
  }

  std::size_t horizon() const { return stages_.size(); }
  std::size_t length() const { return length_; }

  Vector center(std::size_t h, const Vector* next_theta) const {
    const StageData& sd = stages_[h];
    if (sd.count() == 0) return Vector::Zero(static_cast<Eigen::Index>(length_));
    Vector targets = sd.rewards();
    if (next_theta != nullptr) targets += group_max(sd.next_features() * *next_theta, sd.grid_size());
    return geometry_[h].solve_targets * targets;
  }

  // Builds thetas from u (back to front). With `polish`, u_1 is replaced by
  // its closed-form maximizer given the later stages.
  void evaluate(Candidate& c, bool polish) const {
    const std::size_t H = horizon();
    c.thetas.resize(H);
    double residual = 0.0;
    for (std::size_t h = H; h-- > 0;) {
      const Vector w = center(h, h + 1 < H ? &c.thetas[h + 1] : nullptr);
      const double r = opts_.ridge_radius[h];
      const Matrix& inv_chol = geometry_[h].inv_chol;
      if (h == 0 && polish) {
        double best = -std::numeric_limits<double>::infinity();
        Vector best_u = Vector::Zero(static_cast<Eigen::Index>(length_));
        for (Eigen::Index b = 0; b < initial_.rows(); ++b) {
          const Vector v = inv_chol * initial_.row(b).transpose();
          const double norm = v.norm();
          const double value = initial_.row(b).dot(w) + r * norm;
          if (value > best) {
            best = value;
            best_u = norm > 0.0 ? Vector(v / norm) : Vector::Zero(v.size());
          }
        }
        c.u[0] = best_u;
      }
      c.thetas[h] = w + r * (inv_chol.transpose() * c.u[h]);
      residual = std::max(residual, c.thetas[h].norm() - opts_.norm_caps[h]);
    }
    c.residual = std::max(0.0, residual);
    c.value = (initial_ * c.thetas[0]).maxCoeff();
  }

  bool better(const Candidate& a, const Candidate& b) const {
    const bool fa = a.residual <= opts_.slack, fb = b.residual <= opts_.slack;
    if (fa != fb) return fa;
    if (fa) return a.value > b.value;
    return a.residual < b.residual;
  }

  // Raw and polished variants; keeps the better one in `c`.
  void evaluate_best(Candidate& c) const {
    Candidate polished = c;
    evaluate(c, false);
    evaluate(polished, true);
    if (better(polished, c)) c = std::move(polished);
  }

  std::vector<Vector> random_ball(CounterRng& rng) const {
    std::vector<Vector> u(horizon());
    const auto n = static_cast<Eigen::Index>(length_);
    for (auto& v : u) {
      v.resize(n);
      for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
      const double norm = v.norm();
      const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(length_));
      v *= norm > 0.0 ? radius / norm : 0.0;
    }
    return u;
  }

 private:
  std::span<const StageData> stages_;
  const Eigen::Ref<const RowMatrix>& initial_;
  const EleanorOptions& opts_;
  std::size_t length_ = 0;
  std::vector<StageGeometry> geometry_;
};

void project_to_ball(Vector& v) {
  const double norm = v.norm();
  if (norm > 1.0) v /= norm;
}

}  // namespace

EleanorPlan optimistic_plan(std::span<const StageData> stages, const Eigen::Ref<const RowMatrix>& initial_features,
                            const EleanorOptions& options, CounterRng& rng) {
  const Planner planner(stages, initial_features, options);
  const std::size_t H = planner.horizon();
  const auto n = static_cast<Eigen::Index>(planner.length());

  Candidate incumbent;
  incumbent.u.assign(H, Vector::Zero(n));
  planner.evaluate(incumbent, false);

  std::size_t used = 0;
  bool first_restart = true;
  while (used < options.budget) {
    Candidate current;
    if (first_restart) {
      current.u.assign(H, Vector::Zero(n));
      first_restart = false;
    } else {
      current.u = planner.random_ball(rng);
    }
    planner.evaluate_best(current);
    ++used;
    if (planner.better(current, incumbent)) incumbent = current;

    double step = 0.5;
    while (used < options.budget && step >= options.min_step) {
      bool improved = false;
      for (std::size_t h = 0; h < H && used < options.budget; ++h) {
        for (Eigen::Index j = 0; j < n && used < options.budget; ++j) {
          for (double sign : {1.0, -1.0}) {
            if (used >= options.budget) break;
            Candidate trial = current;
            trial.u[h](j) += sign * step;
            project_to_ball(trial.u[h]);
            planner.evaluate_best(trial);
            ++used;
            if (planner.better(trial, current)) {
              current = std::move(trial);
              improved = true;
              if (planner.better(current, incumbent)) incumbent = current;
              break;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }

  EleanorPlan plan;
  plan.thetas = incumbent.thetas;
  plan.optimistic_value = incumbent.value;
  plan.feasibility_residual = plan_residual(stages, plan.thetas, options);
  plan.feasible = plan.feasibility_residual <= options.slack;
  plan.evaluations = used;
  return plan;
}

double plan_residual(std::span<const StageData> stages, const std::vector<Vector>& thetas,
                     const EleanorOptions& options) {
  const std::size_t H = stages.size();
  if (thetas.size() != H) throw InvalidArgument("plan_residual: one theta per stage required");
  double worst = 0.0;
  for (std::size_t h = 0; h < H; ++h) {
    const StageData& sd = stages[h];
    const auto n = static_cast<Eigen::Index>(sd.feature_length());
    Matrix gram = options.lambda * Matrix::Identity(n, n);
    Vector rhs = Vector::Zero(n);
    if (sd.count() > 0) {
      gram.noalias() += sd.features().transpose() * sd.features();
      Vector targets = sd.rewards();
      if (h + 1 < H) targets += group_max(sd.next_features() * thetas[h + 1], sd.grid_size());
      rhs = sd.features().transpose() * targets;
    }
    const Vector delta = thetas[h] - gram.ldlt().solve(rhs);
    const double ellipsoid = std::sqrt(std::max(0.0, delta.dot(gram * delta)));
    worst = std::max({worst, ellipsoid - options.ridge_radius[h], thetas[h].norm() - options.norm_caps[h]});
  }
  return worst;
}

std::size_t act(const EleanorPlan& plan, std::size_t stage, const Vector& state, const Matrix& grid,
                const StateActionFeatures& features) {
  if (grid.rows() == 0) throw InvalidArgument("eleanor act: empty action grid");
  if (stage >= plan.thetas.size()) throw InvalidArgument("eleanor act: stage out of range");
  RowMatrix phi(grid.rows(), static_cast<Eigen::Index>(features.length()));
  features.evaluate_grid(state, grid, std::span<double>(phi.data(), static_cast<std::size_t>(phi.size())));
  return first_argmax(phi * plan.thetas[stage]);
}

}  // namespace smoothrl
