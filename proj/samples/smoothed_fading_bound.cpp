// How much fading a two-link affine network tolerates before the smoothed
// problem loses its Fast-Lipschitz certificate.

#include "fastlip/fastlip.hpp"

#include <cstdio>
#include <memory>

int main() {
  using namespace fastlip;
  const NetworkScenario scn = zoo::affine_two_link();
  const FlProblem base = to_power_problem(std::make_shared<const AffineInterference>(scn), CostModel::sum(), scn.box);

  std::printf("%-12s %8s %12s %s\n", "fading", "lambda", "max|Omega|", "verdict");
  for (double lambda : {0.5, 1.0, kSqrtHalfPi, 2.0}) {
    const auto r = corollary1_check(base, {FadingModel::rayleigh(lambda)}, kDefaultZmin, 1.0, 500, 1);
    std::printf("%-12s %8.4f %12.6f %s\n", "rayleigh", lambda, r.omega_max, to_string(r.verdict));
  }
  for (double zmin : {0.01, 0.1, 0.2, 1.0}) {
    const auto r = corollary1_check(base, {FadingModel::exponential(1.0)}, zmin, 1.0, 500, 1);
    std::printf("%-12s %8.4f %12.6f %s (zmin %g)\n", "exponential", 1.0, r.omega_max, to_string(r.verdict), zmin);
  }

  const auto v = sigma_stationary_points();
  std::printf("\nexponential worst case peaks at lambda zmin = %.4f and %.4f\n", v.v1, v.v2);
  return 0;
}
