#pragma once

// Deterministic sample clouds over boxes. Points are produced in the unit cube
// and mapped by the caller (uniform in log-power, i.e. log-uniform in power).

#include "fastlip/core.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace fastlip {

/// Corners are enumerated only up to this dimension (2^n points).
inline constexpr std::size_t kMaxCornerDimension = 10;

class UnitSampler {
 public:
  explicit UnitSampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform in [0, 1) with 53 random bits; independent of the standard library's
  /// distribution implementations.
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Vector point(Eigen::Index n) {
    Vector u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = uniform();
    return u;
  }

 private:
  std::mt19937_64 rng_;
};

/// All 2^n vertices of the unit cube in binary order (empty above kMaxCornerDimension).
inline std::vector<Vector> unit_corners(Eigen::Index n) {
  std::vector<Vector> out;
  if (n <= 0 || static_cast<std::size_t>(n) > kMaxCornerDimension) return out;
  const std::uint64_t count = std::uint64_t{1} << n;
  out.reserve(count);
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Vector u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = (mask >> i) & 1U ? 1.0 : 0.0;
    out.push_back(std::move(u));
  }
  return out;
}

/// Corners (optional) followed by `count` random points, all in the unit cube.
inline std::vector<Vector> unit_cloud(Eigen::Index n, std::size_t count, std::uint64_t seed,
                                      bool include_corners = true) {
  std::vector<Vector> out;
  if (include_corners) out = unit_corners(n);
  UnitSampler sampler(seed);
  out.reserve(out.size() + count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sampler.point(n));
  return out;
}

/// lo + u (hi - lo).
inline Vector map_uniform(const Vector& lo, const Vector& hi, const Vector& u) {
  return (lo.array() + u.array() * (hi - lo).array()).matrix();
}

/// exp(ln lo + u (ln hi - ln lo)); corners map exactly onto lo / hi.
inline Vector map_log_uniform(const Vector& lo, const Vector& hi, const Vector& u) {
  Vector p(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u(i) == 0.0) {
      p(i) = lo(i);
    } else if (u(i) == 1.0) {
      p(i) = hi(i);
    } else {
      p(i) = std::exp(std::log(lo(i)) + u(i) * (std::log(hi(i)) - std::log(lo(i))));
    }
  }
  return p;
}

}  // namespace fastlip
