#pragma once

#include <cstddef>
#include <vector>

namespace smoothrl {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
};

/// n-node Gauss-Legendre rule on [-1, 1], exact for degree <= 2n-1.
/// Nodes are ascending. Computed by Newton iteration on P_n.
QuadratureRule gauss_legendre(std::size_t n);

/// Gauss-Legendre rule mapped onto [lo, hi].
QuadratureRule gauss_legendre(std::size_t n, double lo, double hi);

/// `panels` equal sub-intervals of [-1, 1], each with an n-node rule.
/// Panel boundaries fall on -1 + 2k/panels, so an even panel count puts a
/// boundary at 0.
QuadratureRule composite_gauss_legendre(std::size_t n, std::size_t panels);

/// Nodes/weights for E[f(Z)], Z ~ N(0, 1) (probabilists' Gauss-Hermite,
/// Golub-Welsch). Weights sum to 1.
QuadratureRule gauss_hermite_normal(std::size_t n);

}  // namespace smoothrl
