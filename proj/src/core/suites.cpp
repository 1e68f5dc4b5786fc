#include "suites.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "experiment.hpp"
#include "legendre_features.hpp"
#include "rng.hpp"
#include "validation.hpp"

namespace smoothrl {

SmoothDensityMdpConfig polynomial_mdp(std::size_t horizon) {
  SmoothDensityMdpConfig c;
  c.horizon = horizon;
  c.custom_density = [](double sn, double s, double a) { return 0.5 + 0.125 * sn * (s + a); };
  c.density_bound = 0.75;
  c.reward_fn = [](double s, double a) { return 0.5 * s * a; };
  c.reward_bound = 0.5;
  return c;
}

namespace {

SuiteResult orthonormality_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const double dev = orthonormality_report(10, 64);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  SuiteResult r;
  r.passed = dev < 1e-10 && secs < 1.0;
  std::ostringstream o;
  o << "max_deviation=" << format_double(dev) << " max_degree=10 quad_order=64 seconds=" << format_double(secs) << "\n";
  r.report = o.str();
  return r;
}

SuiteResult rate_suite() {
  const RateFit abs_fit = approximation_rate([](double x) { return std::abs(x); }, 0, {4, 8, 16, 32});
  const RateFit cos_fit = approximation_rate([](double x) { return std::cos(std::numbers::pi * x); }, 3, {4, 6, 8, 10});
  SuiteResult r;
  r.passed = abs_fit.fitted_slope <= -0.8 && cos_fit.fitted_slope <= -3.0;
  r.report = "# f=abs(x)\n" + rate_report_csv(abs_fit) + "# f=cos(pi x)\n" + rate_report_csv(cos_fit);
  return r;
}

SuiteResult ibe_suite() {
  SuiteResult r{"", true};
  std::ostringstream o;
  o << "mdp,degree,ibe\n";
  double prev = 0.0;
  const unsigned degrees[] = {2, 4, 6, 8};
  for (std::size_t i = 0; i < std::size(degrees); ++i) {
    CounterRng rng(derive_stream(0, "ibe/smooth/" + std::to_string(degrees[i])));
    const FeatureMap map(BasisKind::kLegendreOrthonormal, 2, degrees[i]);
    const double v = empirical_ibe(default_smooth_mdp(2), map, {}, rng).value;
    if (i > 0 && v > prev + 1e-3) r.passed = false;
    prev = v;
    o << "smooth," << degrees[i] << "," << format_double(v) << "\n";
  }
  for (unsigned n : {2u, 4u}) {
    CounterRng rng(derive_stream(0, "ibe/polynomial/" + std::to_string(n)));
    const double v = empirical_ibe(polynomial_mdp(2), FeatureMap(BasisKind::kLegendreOrthonormal, 2, n), {}, rng).value;
    if (!(v < 1e-6)) r.passed = false;
    o << "polynomial," << n << "," << format_double(v) << "\n";
  }
  r.report = o.str();
  return r;
}

}  // namespace

SuiteResult run_suite(std::string_view name) {
  if (name == "orthonormality") return orthonormality_suite();
  if (name == "rate") return rate_suite();
  if (name == "ibe") return ibe_suite();
  throw InvalidArgument("unknown validation suite '" + std::string(name) + "'");
}

}  // namespace smoothrl
