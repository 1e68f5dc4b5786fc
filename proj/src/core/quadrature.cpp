#include "quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "error.hpp"

namespace smoothrl {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence (n >= 1, |x| < 1).
std::pair<double, double> legendre_with_derivative(std::size_t n, double x) {
  double prev = 1.0, cur = x;
  for (std::size_t k = 2; k <= n; ++k) {
    const double dk = static_cast<double>(k);
    const double next = ((2.0 * dk - 1.0) * x * cur - (dk - 1.0) * prev) / dk;
    prev = cur;
    cur = next;
  }
  const double deriv = static_cast<double>(n) * (x * cur - prev) / (x * x - 1.0);
  return {cur, deriv};
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw InvalidArgument("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  if (n == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre_with_derivative(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre_with_derivative(n, x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(std::size_t n, double lo, double hi) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

QuadratureRule composite_gauss_legendre(std::size_t n, std::size_t panels) {
  if (panels == 0) throw InvalidArgument("composite_gauss_legendre: need at least one panel");
  const QuadratureRule base = gauss_legendre(n);
  QuadratureRule rule;
  rule.nodes.reserve(n * panels);
  rule.weights.reserve(n * panels);
  const double width = 2.0 / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = -1.0 + width * static_cast<double>(p);
    const double mid = lo + 0.5 * width;
    for (std::size_t i = 0; i < n; ++i) {
      rule.nodes.push_back(mid + 0.5 * width * base.nodes[i]);
      rule.weights.push_back(0.5 * width * base.weights[i]);
    }
  }
  return rule;
}

QuadratureRule gauss_hermite_normal(std::size_t n) {
  if (n == 0) throw InvalidArgument("gauss_hermite_normal: need at least one node");
  // Jacobi matrix of the monic probabilists' Hermite recurrence: off-diagonal sqrt(k).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 1; k < n; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jacobi(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b;
    jacobi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    rule.nodes[i] = solver.eigenvalues()(ii);
    const double v0 = solver.eigenvectors()(0, ii);
    rule.weights[i] = v0 * v0;
  }
  // symmetrize against eigen-solver round-off so E[Z] is exactly 0
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace smoothrl
