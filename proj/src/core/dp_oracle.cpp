#include "dp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "error.hpp"
#include "quadrature.hpp"

namespace smoothrl {

namespace {

class StateGrid {
 public:
  StateGrid(std::size_t dim, std::size_t points) : dim_(dim), points_(points) {
    size_ = 1;
    for (std::size_t i = 0; i < dim; ++i) size_ *= points;
  }

  std::size_t size() const { return size_; }
  double coord(std::size_t j) const { return -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(points_ - 1); }

  Vector point(std::size_t flat) const {
    Vector s(static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < dim_; ++i) {
      s(static_cast<Eigen::Index>(i)) = coord(flat % points_);
      flat /= points_;
    }
    return s;
  }

  // Multilinear interpolation; points outside the cube are clamped.
  double interpolate(const std::vector<double>& values, const double* s) const {
    std::size_t base[2] = {0, 0};
    double frac[2] = {0.0, 0.0};
    const double cell = 2.0 / static_cast<double>(points_ - 1);
    for (std::size_t i = 0; i < dim_; ++i) {
      const double t = std::clamp((s[i] + 1.0) / cell, 0.0, static_cast<double>(points_ - 1));
      auto j = static_cast<std::size_t>(t);
      if (j >= points_ - 1) j = points_ - 2;
      base[i] = j;
      frac[i] = t - static_cast<double>(j);
    }
    if (dim_ == 1) return (1.0 - frac[0]) * values[base[0]] + frac[0] * values[base[0] + 1];
    const std::size_t i00 = base[0] + points_ * base[1];
    const double f0 = frac[0], f1 = frac[1];
    return (1.0 - f0) * (1.0 - f1) * values[i00] + f0 * (1.0 - f1) * values[i00 + 1] +
           (1.0 - f0) * f1 * values[i00 + points_] + f0 * f1 * values[i00 + points_ + 1];
  }

 private:
  std::size_t dim_;
  std::size_t points_;
  std::size_t size_;
};

}  // namespace

double dp_oracle(const SquashedLqrConfig& cfg, const DpOracleOptions& options) {
  cfg.validate();
  const std::size_t ds = cfg.state_dim(), da = cfg.action_dim();
  if (ds > 2) throw InvalidArgument("dp_oracle: state dimension must be at most 2");
  if (options.state_points < 2 || options.action_points < 1 || options.noise_nodes < 1)
    throw InvalidArgument("dp_oracle: grids must be non-trivial");
  const StateGrid grid(ds, options.state_points);
  const Matrix actions = uniform_action_grid(da, options.action_points);

  const QuadratureRule gh = gauss_hermite_normal(options.noise_nodes);
  const bool noisy = cfg.noise_std > 0.0;
  const std::size_t per_coord = noisy ? gh.size() : 1;
  std::size_t noise_count = 1;
  for (std::size_t i = 0; i < ds; ++i) noise_count *= per_coord;
  const double cells = static_cast<double>(grid.size()) * static_cast<double>(actions.rows()) *
                       static_cast<double>(noise_count);
  if (cells > static_cast<double>(options.max_grid_cells) * 64.0)
    throw InvalidArgument("dp_oracle: grid resolution exceeds the memory/time cap");

  Matrix offsets(static_cast<Eigen::Index>(noise_count), static_cast<Eigen::Index>(ds));
  std::vector<double> noise_w(noise_count, 1.0);
  for (std::size_t k = 0; k < noise_count; ++k) {
    std::size_t rest = k;
    for (std::size_t i = 0; i < ds; ++i) {
      const std::size_t j = rest % per_coord;
      rest /= per_coord;
      offsets(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = noisy ? cfg.noise_std * gh.nodes[j] : 0.0;
      noise_w[k] *= noisy ? gh.weights[j] : 1.0;
    }
  }

  std::vector<double> next_v(grid.size(), 0.0), v(grid.size(), 0.0);
  Vector mean(static_cast<Eigen::Index>(ds)), x(static_cast<Eigen::Index>(ds));
  const double spacing = options.action_points > 1 ? 2.0 / static_cast<double>(options.action_points - 1) : 1.0;
  for (std::size_t h = cfg.horizon; h-- > 0;) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const Vector s = grid.point(g);
      const double state_cost = s.dot(cfg.Q * s);
      auto q = [&](const Vector& a) {
        double value = -state_cost - a.dot(cfg.R * a);
        if (h + 1 < cfg.horizon) {
          mean = cfg.A * s + cfg.B * a;
          double expect = 0.0;
          for (std::size_t k = 0; k < noise_count; ++k) {
            x = mean + offsets.row(static_cast<Eigen::Index>(k)).transpose();
            x /= 1.0 + x.norm();
            expect += noise_w[k] * grid.interpolate(next_v, x.data());
          }
          value += expect;
        }
        return value;
      };
      double best = -std::numeric_limits<double>::infinity();
      Vector best_a;
      for (Eigen::Index b = 0; b < actions.rows(); ++b) {
        const Vector a = actions.row(b).transpose();
        const double value = q(a);
        if (value > best) {
          best = value;
          best_a = a;
        }
      }
      // Golden-section search along each action coordinate within one grid
      // cell of the best grid action.
      for (std::size_t i = 0; i < da && options.refine_iterations > 0; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        double lo = std::max(-1.0, best_a(ii) - spacing), hi = std::min(1.0, best_a(ii) + spacing);
        constexpr double kInvPhi = 0.6180339887498949;
        Vector a = best_a;
        double x1 = hi - kInvPhi * (hi - lo), x2 = lo + kInvPhi * (hi - lo);
        a(ii) = x1;
        double f1 = q(a);
        a(ii) = x2;
        double f2 = q(a);
        for (std::size_t it = 0; it < options.refine_iterations; ++it) {
          if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            a(ii) = x2;
            f2 = q(a);
          } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            a(ii) = x1;
            f1 = q(a);
          }
        }
        const double fx = std::max(f1, f2);
        if (fx > best) {
          best = fx;
          best_a(ii) = f1 >= f2 ? x1 : x2;
        }
      }
      v[g] = best;
    }
    std::swap(v, next_v);
  }
  return grid.interpolate(next_v, cfg.initial_state.data());
}

}  // namespace smoothrl
