#include "validation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "eleanor.hpp"
#include "quadrature.hpp"

namespace smoothrl {

double orthonormality_report(unsigned max_degree, std::size_t quad_order) {
  if (quad_order < static_cast<std::size_t>(max_degree) + 1)
    throw InvalidArgument("orthonormality_report: quadrature order must exceed max degree");
  const QuadratureRule rule = gauss_legendre(quad_order);
  const auto n = static_cast<Eigen::Index>(max_degree) + 1;
  Matrix gram = Matrix::Zero(n, n);
  std::vector<double> table(static_cast<std::size_t>(n));
  for (std::size_t q = 0; q < rule.size(); ++q) {
    legendre_normalized_table(max_degree, rule.nodes[q], table);
    const Eigen::Map<const Vector> p(table.data(), n);
    gram.noalias() += rule.weights[q] * p * p.transpose();
  }
  return (gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

Matrix multivariate_gram(const FeatureMap& map, std::size_t quad_order) {
  if (map.kind() != BasisKind::kLegendreOrthonormal) throw InvalidArgument("multivariate_gram: Legendre map required");
  const QuadratureRule rule = gauss_legendre(quad_order);
  const std::size_t d = map.dimension();
  const auto n = static_cast<Eigen::Index>(map.length());
  Matrix gram = Matrix::Zero(n, n);
  std::vector<std::size_t> counter(d, 0);
  std::vector<double> point(d);
  Vector psi(n);
  while (true) {
    double weight = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      point[i] = rule.nodes[counter[i]];
      weight *= rule.weights[counter[i]];
    }
    map.evaluate_orthonormal_products(point, std::span<double>(psi.data(), static_cast<std::size_t>(n)));
    gram.noalias() += weight * psi * psi.transpose();
    std::size_t i = 0;
    while (i < d && ++counter[i] == rule.size()) counter[i++] = 0;
    if (i == d) break;
  }
  return gram;
}

namespace {

// 32 panels keep a node boundary at 0, where the test functions have kinks.
const QuadratureRule& projection_rule() {
  static const QuadratureRule rule = composite_gauss_legendre(24, 32);
  return rule;
}

}  // namespace

double projection_sup_error(const ScalarFn& f, unsigned degree, std::size_t grid_points) {
  if (degree > kDefaultMaxLegendreDegree) throw InvalidArgument("projection: degree exceeds 64");
  if (grid_points < 2) throw InvalidArgument("projection: need at least two grid points");
  const QuadratureRule& rule = projection_rule();
  std::vector<double> coeffs(degree + 1, 0.0), table(degree + 1);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double fx = f(rule.nodes[q]);
    legendre_normalized_table(degree, rule.nodes[q], table);
    for (unsigned n = 0; n <= degree; ++n) coeffs[n] += rule.weights[q] * fx * table[n];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    legendre_normalized_table(degree, x, table);
    double approx = 0.0;
    for (unsigned n = 0; n <= degree; ++n) approx += coeffs[n] * table[n];
    worst = std::max(worst, std::abs(f(x) - approx));
  }
  return worst;
}

RateFit approximation_rate(const ScalarFn& f, unsigned smoothness, const std::vector<unsigned>& degrees) {
  if (degrees.size() < 2) throw InvalidArgument("approximation_rate: need at least two degrees");
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < smoothness + 1 || degrees[i] > kDefaultMaxLegendreDegree)
      throw InvalidArgument("approximation_rate: degree " + std::to_string(degrees[i]) + " outside [nu+1, 64]");
    if (i > 0 && degrees[i] <= degrees[i - 1])
      throw InvalidArgument("approximation_rate: degrees must be strictly increasing");
  }
  RateFit fit;
  fit.degrees = degrees;
  for (unsigned n : degrees) {
    const double err = projection_sup_error(f, n);
    if (!(err > kDegenerateErrorThreshold))
      throw DegenerateFit("approximation_rate: projection error " + std::to_string(err) + " at degree " +
                          std::to_string(n) + " (target lies in the span)");
    fit.errors.push_back(err);
  }
  const auto m = static_cast<double>(degrees.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const double x = std::log(static_cast<double>(degrees[i])), y = std::log(fit.errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.intercept = (sy - fit.fitted_slope * sx) / m;
  double ss = 0.0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const double r = std::log(fit.errors[i]) - fit.intercept -
                     fit.fitted_slope * std::log(static_cast<double>(degrees[i]));
    ss += r * r;
  }
  fit.fit_residual = std::sqrt(ss / m);
  return fit;
}

namespace {

std::vector<double> linspace(std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  return out;
}

}  // namespace

IbeEstimate empirical_ibe(const SmoothDensityMdpConfig& mdp, const FeatureMap& map, const IbeOptions& options,
                          CounterRng& rng) {
  if (map.kind() != BasisKind::kLegendreOrthonormal || map.dimension() != 2)
    throw InvalidArgument("empirical_ibe: needs a 2-D Legendre map over (state, action)");
  if (map.length() > kEleanorMaxFeatures) throw InvalidArgument("empirical_ibe: feature length exceeds 64");
  if (options.state_points < 2 || options.action_points < 1 || options.quad_order < 2)
    throw InvalidArgument("empirical_ibe: grids too small");

  const QuadratureRule rule = gauss_legendre(options.quad_order);
  for (double s : {-1.0, 0.0, 1.0}) {
    for (double a : {-1.0, 0.0, 1.0}) {
      const double mass = rule.integrate([&](double x) { return density_eval(mdp, x, s, a); });
      if (std::abs(mass - 1.0) > 1e-6)
        throw NumericalError("empirical_ibe: density integrates to " + std::to_string(mass) + " at (" +
                             std::to_string(s) + ", " + std::to_string(a) + ")");
    }
  }

  IbeEstimate est;
  est.theta_radius = options.theta_radius;
  if (!(est.theta_radius > 0.0)) {
    const auto caps = norm_caps_from_schedule(confidence_radii(mdp.horizon, options.schedule_base), map.length(),
                                              map.scale(), 4.0);
    est.theta_radius = caps.front();
  }
  if (options.theta_samples == 0) {
    est.empty_sample = true;
    return est;
  }

  const std::vector<double> states = linspace(options.state_points), actions = linspace(options.action_points);
  const auto len = static_cast<Eigen::Index>(map.length());
  const auto pairs = static_cast<Eigen::Index>(states.size() * actions.size());
  const auto nq = static_cast<Eigen::Index>(rule.size());
  const auto na = static_cast<Eigen::Index>(actions.size());

  Matrix grid_features(pairs, len), next_features(nq * na, len), weighted_density(pairs, nq);
  Vector rewards(pairs);
  std::vector<double> phi(map.length());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < actions.size(); ++j) {
      const auto row = static_cast<Eigen::Index>(i * actions.size() + j);
      const double x[2] = {states[i], actions[j]};
      map.evaluate(x, phi);
      grid_features.row(row) = Eigen::Map<const Vector>(phi.data(), len).transpose();
      rewards(row) = mdp.reward_fn(states[i], actions[j]);
      for (Eigen::Index q = 0; q < nq; ++q)
        weighted_density(row, q) =
            rule.weights[static_cast<std::size_t>(q)] * density_eval(mdp, rule.nodes[static_cast<std::size_t>(q)],
                                                                      states[i], actions[j]);
    }
  }
  for (Eigen::Index q = 0; q < nq; ++q) {
    for (Eigen::Index j = 0; j < na; ++j) {
      const double x[2] = {rule.nodes[static_cast<std::size_t>(q)], actions[static_cast<std::size_t>(j)]};
      map.evaluate(x, phi);
      next_features.row(q * na + j) = Eigen::Map<const Vector>(phi.data(), len).transpose();
    }
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(grid_features);

  Vector theta(len), next_value(nq);
  for (std::size_t t = 0; t < options.theta_samples; ++t) {
    for (Eigen::Index i = 0; i < len; ++i) theta(i) = rng.normal();
    const double radius = est.theta_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(len));
    theta *= radius / theta.norm();
    const Vector q_next = next_features * theta;
    for (Eigen::Index q = 0; q < nq; ++q) next_value(q) = q_next.segment(q * na, na).maxCoeff();
    const Vector target = rewards + weighted_density * next_value;
    const Vector fitted = grid_features * qr.solve(target);
    est.value = std::max(est.value, (fitted - target).cwiseAbs().maxCoeff());
  }
  return est;
}

std::string rate_report_csv(const RateFit& fit) {
  std::ostringstream out;
  out.precision(12);
  out << "degree,error\n";
  for (std::size_t i = 0; i < fit.degrees.size(); ++i) out << fit.degrees[i] << ',' << fit.errors[i] << '\n';
  out << "# slope=" << fit.fitted_slope << ",residual=" << fit.fit_residual << '\n';
  return out.str();
}

}  // namespace smoothrl
