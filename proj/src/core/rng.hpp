#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace smoothrl {

/// Counter-based generator: output i is splitmix64_mix(key + (i+1) * golden).
///
/// Rule version 1. Streams are derived with derive_stream(master, label):
/// key = mix(mix(master) ^ fnv1a64(label)). Normal variates use Box-Muller
/// on two consecutive uniforms and cache nothing, so every normal draw
/// consumes exactly two counter values.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  static constexpr int kRuleVersion = 1;

  explicit CounterRng(std::uint64_t key = 0) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_low();
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);
std::uint64_t fnv1a64(std::string_view text);
std::uint64_t derive_stream(std::uint64_t master_seed, std::string_view label);

}  // namespace smoothrl
