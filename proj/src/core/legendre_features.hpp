#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace smoothrl {

inline constexpr unsigned kDefaultMaxLegendreDegree = 64;
inline constexpr std::size_t kDefaultIndexSetCap = 100000;
inline constexpr double kDomainTolerance = 1e-12;

/// L2-normalized Legendre polynomial sqrt((2n+1)/2) * P_n(x) on [-1, 1].
double legendre_normalized(unsigned n, double x, unsigned max_degree = kDefaultMaxLegendreDegree);

/// Fills out[0..n] with the normalized Legendre values of degree 0..n at x.
/// No domain checks.
void legendre_normalized_table(unsigned n, double x, std::span<double> out);

struct MultiIndex {
  std::vector<unsigned> exponents;

  unsigned total_degree() const;
  std::size_t dimension() const { return exponents.size(); }
  auto operator<=>(const MultiIndex&) const = default;
};

std::size_t binomial(std::size_t n, std::size_t k, std::size_t cap = kDefaultIndexSetCap);

/// All exponent tuples of dimension d with total degree <= degree, ascending
/// total degree, lexicographic within a degree.
std::vector<MultiIndex> enumerate_index_set(std::size_t dimension, unsigned degree,
                                            std::size_t cap = kDefaultIndexSetCap);

enum class BasisKind { kLegendreOrthonormal, kMonomialNaive };

struct FeatureMapOptions {
  unsigned max_degree = kDefaultMaxLegendreDegree;
  std::size_t index_cap = kDefaultIndexSetCap;
  /// Upper bound on the number of points in the grid used to compute `scale`.
  std::size_t scale_grid_budget = 20000;
};

/// Multivariate total-degree polynomial features over [-1, 1]^d.
///
/// Legendre component g is scale * length^{-1/2} * prod_i p_{g_i}(x_i), with p
/// the normalized 1-D polynomials; scale is 1 / sup ||.||_2 of the unscaled
/// vector over a grid that includes the corners of the cube (where the sup is
/// attained), so ||phi(x)||_2 <= 1. Monomial components are prod_i x_i^{g_i}
/// with scale fixed at 1. Immutable after construction.
class FeatureMap {
 public:
  FeatureMap(BasisKind kind, std::size_t dimension, unsigned degree, FeatureMapOptions options = {});

  BasisKind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }
  unsigned degree() const { return degree_; }
  std::size_t length() const { return index_set_.size(); }
  double scale() const { return scale_; }
  const std::vector<MultiIndex>& index_set() const { return index_set_; }

  /// Dispatches on kind(). out.size() must equal length().
  void evaluate(std::span<const double> x, std::span<double> out) const;
  std::vector<double> evaluate(std::span<const double> x) const;

  /// Products of normalized 1-D polynomials, without length^{-1/2} and scale.
  void evaluate_orthonormal_products(std::span<const double> x, std::span<double> out) const;

 private:
  void check_point(std::span<const double> x, std::span<double> out) const;
  double compute_scale() const;

  BasisKind kind_;
  std::size_t dimension_;
  unsigned degree_;
  unsigned max_degree_;
  std::vector<MultiIndex> index_set_;
  std::vector<unsigned> flat_exponents_;
  double normalization_ = 1.0;
  double scale_ = 1.0;
  std::size_t scale_grid_budget_;
};

/// Legendre components; map.kind() must be kLegendreOrthonormal.
std::vector<double> feature_vector(const FeatureMap& map, std::span<const double> x);
/// Monomial components; map.kind() must be kMonomialNaive.
std::vector<double> monomial_feature_vector(const FeatureMap& map, std::span<const double> x);

}  // namespace smoothrl
