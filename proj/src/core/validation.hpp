#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "environments.hpp"
#include "error.hpp"
#include "legendre_features.hpp"
#include "rng.hpp"

namespace smoothrl {

/// Raised when every projection error needed for a rate fit is not
/// strictly positive (the target lies in the polynomial span).
struct DegenerateFit : NumericalError {
  explicit DegenerateFit(const std::string& w) : NumericalError(w) {}
};

inline constexpr double kDegenerateErrorThreshold = 1e-12;

/// max |int p_i p_j - delta_ij| over i, j <= max_degree using a
/// quad_order-node Gauss-Legendre rule.
double orthonormality_report(unsigned max_degree, std::size_t quad_order);

/// Gram matrix of the unnormalized tensor products (length^{-1/2} and scale
/// removed) of a Legendre map, by tensor Gauss-Legendre quadrature.
Matrix multivariate_gram(const FeatureMap& map, std::size_t quad_order);

using ScalarFn = std::function<double(double)>;

/// Sup-norm error on `grid_points` uniform points of the degree-N L2
/// projection of f onto the normalized Legendre basis.
double projection_sup_error(const ScalarFn& f, unsigned degree, std::size_t grid_points = 10000);

struct RateFit {
  std::vector<unsigned> degrees;
  std::vector<double> errors;
  double fitted_slope = 0.0;
  double intercept = 0.0;
  /// RMS residual of the log-log least-squares line.
  double fit_residual = 0.0;
};

/// Projection errors for each degree and the least-squares slope of
/// log(error) against log(N). Degrees must be strictly increasing and lie in
/// [smoothness + 1, 64].
RateFit approximation_rate(const ScalarFn& f, unsigned smoothness, const std::vector<unsigned>& degrees);

struct IbeOptions {
  std::size_t theta_samples = 64;
  std::size_t state_points = 101;
  std::size_t action_points = 21;
  std::size_t quad_order = 64;
  /// Radius of the theta ball; <= 0 selects the Eleanor cap of the first
  /// stage for a schedule with base `schedule_base`.
  double theta_radius = 0.0;
  double schedule_base = 2.0;
};

struct IbeEstimate {
  double value = 0.0;
  /// Set when no theta was sampled.
  bool empty_sample = false;
  double theta_radius = 0.0;
};

/// Monte-Carlo estimate of the inherent Bellman error of a 2-D (state,
/// action) Legendre map for a known-density MDP: max over sampled theta of
/// the grid sup-norm residual of the least-squares projection of T* Q_theta,
/// with T* evaluated by quadrature against the closed-form density and a
/// grid max over next actions.
IbeEstimate empirical_ibe(const SmoothDensityMdpConfig& mdp, const FeatureMap& map, const IbeOptions& options,
                          CounterRng& rng);

/// Writes "degree,error" rows followed by a "# slope=...,residual=..." line.
std::string rate_report_csv(const RateFit& fit);

}  // namespace smoothrl
