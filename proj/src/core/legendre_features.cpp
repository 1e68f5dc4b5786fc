#include "legendre_features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace smoothrl {

void legendre_normalized_table(unsigned n, double x, std::span<double> out) {
  // (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
  double prev = 1.0, cur = x;
  out[0] = std::sqrt(0.5);
  if (n == 0) return;
  out[1] = std::sqrt(1.5) * x;
  for (unsigned k = 1; k < n; ++k) {
    const double dk = static_cast<double>(k);
    const double next = ((2.0 * dk + 1.0) * x * cur - dk * prev) / (dk + 1.0);
    prev = cur;
    cur = next;
    out[k + 1] = std::sqrt((2.0 * dk + 3.0) / 2.0) * cur;
  }
}

double legendre_normalized(unsigned n, double x, unsigned max_degree) {
  if (!(std::abs(x) <= 1.0 + kDomainTolerance))
    throw DomainError("legendre: x = " + std::to_string(x) + " outside [-1, 1]");
  if (n > max_degree)
    throw InvalidArgument("legendre: degree " + std::to_string(n) + " exceeds max " + std::to_string(max_degree));
  std::vector<double> table(n + 1);
  legendre_normalized_table(n, x, table);
  return table[n];
}

unsigned MultiIndex::total_degree() const {
  unsigned s = 0;
  for (unsigned g : exponents) s += g;
  return s;
}

std::size_t binomial(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  // C(n, i) = C(n, i-1) * (n-i+1) / i stays integral at every step
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t factor = n - k + i;
    if (result > std::numeric_limits<std::size_t>::max() / factor)
      throw InvalidArgument("binomial coefficient overflows");
    result = result * factor / i;
    if (result > cap)
      throw InvalidArgument("index set size exceeds cap of " + std::to_string(cap));
  }
  return result;
}

namespace {

// Lexicographic enumeration of d-tuples summing exactly to `total`.
void enumerate_exact(std::size_t dimension, unsigned total, std::vector<unsigned>& prefix,
                     std::vector<MultiIndex>& out) {
  if (prefix.size() + 1 == dimension) {
    prefix.push_back(total);
    out.push_back(MultiIndex{prefix});
    prefix.pop_back();
    return;
  }
  for (unsigned g = 0; g <= total; ++g) {
    prefix.push_back(g);
    enumerate_exact(dimension, total - g, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_index_set(std::size_t dimension, unsigned degree, std::size_t cap) {
  if (dimension == 0) throw InvalidArgument("index set: dimension must be positive");
  const std::size_t count = binomial(static_cast<std::size_t>(degree) + dimension, dimension, cap);
  std::vector<MultiIndex> out;
  out.reserve(count);
  std::vector<unsigned> prefix;
  prefix.reserve(dimension);
  for (unsigned total = 0; total <= degree; ++total) enumerate_exact(dimension, total, prefix, out);
  return out;
}

FeatureMap::FeatureMap(BasisKind kind, std::size_t dimension, unsigned degree, FeatureMapOptions options)
    : kind_(kind),
      dimension_(dimension),
      degree_(degree),
      max_degree_(options.max_degree),
      scale_grid_budget_(options.scale_grid_budget) {
  if (degree > max_degree_)
    throw InvalidArgument("feature map: degree " + std::to_string(degree) + " exceeds max " +
                          std::to_string(max_degree_));
  index_set_ = enumerate_index_set(dimension, degree, options.index_cap);
  flat_exponents_.reserve(index_set_.size() * dimension);
  for (const auto& idx : index_set_)
    flat_exponents_.insert(flat_exponents_.end(), idx.exponents.begin(), idx.exponents.end());
  if (kind_ == BasisKind::kLegendreOrthonormal) {
    normalization_ = 1.0 / std::sqrt(static_cast<double>(index_set_.size()));
    scale_ = 1.0 / compute_scale();
  }
}

void FeatureMap::check_point(std::span<const double> x, std::span<double> out) const {
  if (x.size() != dimension_)
    throw InvalidArgument("feature map: point has dimension " + std::to_string(x.size()) + ", expected " +
                          std::to_string(dimension_));
  if (out.size() != length())
    throw InvalidArgument("feature map: output has length " + std::to_string(out.size()) + ", expected " +
                          std::to_string(length()));
  for (double v : x)
    if (!(std::abs(v) <= 1.0 + kDomainTolerance))
      throw DomainError("feature map: coordinate " + std::to_string(v) + " outside [-1, 1]");
}

void FeatureMap::evaluate_orthonormal_products(std::span<const double> x, std::span<double> out) const {
  check_point(x, out);
  const std::size_t stride = degree_ + 1;
  // small fixed buffer covers every experiment; fall back to the heap otherwise
  double stack_table[8 * 11];
  std::vector<double> heap_table;
  double* table = stack_table;
  if (dimension_ * stride > std::size(stack_table)) {
    heap_table.resize(dimension_ * stride);
    table = heap_table.data();
  }
  for (std::size_t i = 0; i < dimension_; ++i)
    legendre_normalized_table(degree_, x[i], std::span<double>(table + i * stride, stride));
  const unsigned* e = flat_exponents_.data();
  for (std::size_t k = 0; k < out.size(); ++k) {
    double prod = 1.0;
    for (std::size_t i = 0; i < dimension_; ++i, ++e) prod *= table[i * stride + *e];
    out[k] = prod;
  }
}

void FeatureMap::evaluate(std::span<const double> x, std::span<double> out) const {
  if (kind_ == BasisKind::kLegendreOrthonormal) {
    evaluate_orthonormal_products(x, out);
    const double factor = normalization_ * scale_;
    for (double& v : out) v *= factor;
    return;
  }
  check_point(x, out);
  const unsigned* e = flat_exponents_.data();
  for (std::size_t k = 0; k < out.size(); ++k) {
    double prod = 1.0;
    for (std::size_t i = 0; i < dimension_; ++i, ++e) {
      for (unsigned p = 0; p < *e; ++p) prod *= x[i];
    }
    out[k] = prod;
  }
}

std::vector<double> FeatureMap::evaluate(std::span<const double> x) const {
  std::vector<double> out(length());
  evaluate(x, out);
  return out;
}

double FeatureMap::compute_scale() const {
  std::size_t per_axis = 2;
  while (true) {
    const double next = std::pow(static_cast<double>(per_axis + 1), static_cast<double>(dimension_));
    if (next > static_cast<double>(scale_grid_budget_) || per_axis >= 201) break;
    ++per_axis;
  }
  std::vector<std::size_t> counter(dimension_, 0);
  std::vector<double> point(dimension_), values(length());
  double best = 0.0;
  while (true) {
    for (std::size_t i = 0; i < dimension_; ++i)
      point[i] = -1.0 + 2.0 * static_cast<double>(counter[i]) / static_cast<double>(per_axis - 1);
    evaluate_orthonormal_products(point, values);
    double sq = 0.0;
    for (double v : values) sq += v * v;
    best = std::max(best, sq);
    std::size_t i = 0;
    while (i < dimension_ && ++counter[i] == per_axis) counter[i++] = 0;
    if (i == dimension_) break;
  }
  return normalization_ * std::sqrt(best);
}

std::vector<double> feature_vector(const FeatureMap& map, std::span<const double> x) {
  if (map.kind() != BasisKind::kLegendreOrthonormal)
    throw InvalidArgument("feature_vector requires a Legendre feature map");
  return map.evaluate(x);
}

std::vector<double> monomial_feature_vector(const FeatureMap& map, std::span<const double> x) {
  if (map.kind() != BasisKind::kMonomialNaive)
    throw InvalidArgument("monomial_feature_vector requires a monomial feature map");
  return map.evaluate(x);
}

}  // namespace smoothrl
