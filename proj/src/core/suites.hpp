#pragma once

#include <string>
#include <string_view>

#include "environments.hpp"

namespace smoothrl {

struct SuiteResult {
  std::string report;
  bool passed = false;
};

/// Density 1/2 + s'(s + a)/8 and reward s a / 2: T* maps every Q into
/// polynomials of degree 2, so the IBE of any map with N >= 2 is zero.
SmoothDensityMdpConfig polynomial_mdp(std::size_t horizon = 2);

/// "orthonormality", "rate" or "ibe". Throws InvalidArgument on any other
/// name.
SuiteResult run_suite(std::string_view name);

}  // namespace smoothrl
