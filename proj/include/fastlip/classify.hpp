#pragma once

// Sampling refuters for the standard, type-II standard and two-sided scalable
// classes. "holds" means no counterexample among the drawn samples; it is not a
// proof of class membership.

#include "fastlip/interference.hpp"
#include "fastlip/sampling.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

namespace fastlip {

/// Relative slack for strict inequalities a < b.
inline constexpr double kStrictSlack = 1e-12;
/// Absolute slack for gradient sign tests.
inline constexpr double kSignSlack = 1e-10;

inline bool strictly_less(double a, double b) {
  return a < b + kStrictSlack * std::max(std::abs(a), std::abs(b));
}

struct ClassWitness {
  std::string property;  // positivity, monotonicity, scalability, two-sided-scalability
  Vector p;
  std::optional<Vector> q;  // second point of a two-sided pair
  double c = 1.0;
  Eigen::Index component = -1;
  Eigen::Index input = -1;  // gradient row for monotonicity failures
  double lhs = 0.0;
  double rhs = 0.0;
};

struct ClassVerdict {
  bool holds = true;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::optional<ClassWitness> witness;
};

namespace detail {

/// Sample points of the box in power coordinates: corners first, then
/// log-uniform draws. Zero lower bounds are kept at the corners unless the model
/// needs p > 0; random draws use a 1e-9 * p_max floor.
inline std::vector<Vector> class_samples(const InterferenceFunction& m, const PowerBox& box,
                                         std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("classifier: samples must be >= 1");
  detail::require_size(static_cast<Eigen::Index>(box.size()), static_cast<Eigen::Index>(m.size()),
                       "classifier box");
  const Vector floor_lo = box.lower.cwiseMax(1e-9 * box.upper);
  const Vector corner_lo = m.requires_positive_input() ? floor_lo : box.lower;
  std::vector<Vector> pts;
  for (const Vector& u : unit_corners(box.lower.size())) {
    pts.push_back(map_uniform(corner_lo, box.upper, u));
  }
  UnitSampler sampler(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    pts.push_back(map_log_uniform(floor_lo, box.upper, sampler.point(box.lower.size())));
  }
  return pts;
}

/// c drawn log-uniformly from (1, 2].
inline double draw_scale(UnitSampler& s) { return std::exp((1.0 - s.uniform()) * std::log(2.0)); }

inline bool has_zero(const Vector& p) { return (p.array() == 0.0).any(); }

template <typename SignOk>
std::optional<ClassWitness> check_signs(const InterferenceFunction& m, const Vector& p, SignOk ok) {
  if (m.requires_positive_input() && has_zero(p)) return std::nullopt;
  const Gradient g = m.gradient(p);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      if (!ok(g(i, j))) {
        ClassWitness w{"monotonicity", p, std::nullopt, 1.0, j, i, g(i, j), 0.0};
        return w;
      }
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Positivity, monotonicity (grad I >= 0) and scalability I(cp) < c I(p).
inline ClassVerdict classify_standard(const InterferenceFunction& m, const PowerBox& box,
                                      std::size_t samples, std::uint64_t seed) {
  const auto pts = detail::class_samples(m, box, samples, seed);
  UnitSampler scales(seed ^ 0x5ca1ab1eULL);
  ClassVerdict out{true, pts.size(), seed, std::nullopt};
  for (const Vector& p : pts) {
    const double c = detail::draw_scale(scales);
    const Vector ip = m.eval(p);
    for (Eigen::Index i = 0; i < ip.size(); ++i) {
      if (!strictly_less(0.0, ip(i))) {
        out.holds = false;
        out.witness = ClassWitness{"positivity", p, std::nullopt, 1.0, i, -1, ip(i), 0.0};
        return out;
      }
    }
    if (auto w = detail::check_signs(m, p, [](double v) { return v >= -kSignSlack; })) {
      out.holds = false;
      out.witness = std::move(w);
      return out;
    }
    const Vector icp = m.eval(c * p);
    for (Eigen::Index i = 0; i < ip.size(); ++i) {
      if (!strictly_less(icp(i), c * ip(i))) {
        out.holds = false;
        out.witness = ClassWitness{"scalability", p, std::nullopt, c, i, -1, icp(i), c * ip(i)};
        return out;
      }
    }
  }
  return out;
}

/// Type-II monotonicity (grad I <= 0) and scalability I(cp) > I(p) / c.
inline ClassVerdict classify_type2(const InterferenceFunction& m, const PowerBox& box,
                                   std::size_t samples, std::uint64_t seed) {
  const auto pts = detail::class_samples(m, box, samples, seed);
  UnitSampler scales(seed ^ 0x5ca1ab1eULL);
  ClassVerdict out{true, pts.size(), seed, std::nullopt};
  for (const Vector& p : pts) {
    const double c = detail::draw_scale(scales);
    if (auto w = detail::check_signs(m, p, [](double v) { return v <= kSignSlack; })) {
      out.holds = false;
      out.witness = std::move(w);
      return out;
    }
    const Vector ip = m.eval(p);
    const Vector icp = m.eval(c * p);
    for (Eigen::Index i = 0; i < ip.size(); ++i) {
      if (!strictly_less(ip(i) / c, icp(i))) {
        out.holds = false;
        out.witness = ClassWitness{"scalability", p, std::nullopt, c, i, -1, ip(i) / c, icp(i)};
        return out;
      }
    }
  }
  return out;
}

/// (1/c) I(p) < I(q) < c I(p) for random c in (1, 2] and (1/c) p <= q <= c p.
inline ClassVerdict classify_two_sided(const InterferenceFunction& m, const PowerBox& box,
                                       std::size_t samples, std::uint64_t seed) {
  const auto pts = detail::class_samples(m, box, samples, seed);
  UnitSampler draws(seed ^ 0x7150d3dULL);
  ClassVerdict out{true, pts.size(), seed, std::nullopt};
  for (const Vector& p : pts) {
    const double c = detail::draw_scale(draws);
    Vector q(p.size());
    for (Eigen::Index i = 0; i < p.size(); ++i) q(i) = p(i) * std::pow(c, draws.uniform(-1.0, 1.0));
    if (m.requires_positive_input() && detail::has_zero(p)) continue;
    const Vector ip = m.eval(p);
    const Vector iq = m.eval(q);
    for (Eigen::Index i = 0; i < ip.size(); ++i) {
      if (!strictly_less(ip(i) / c, iq(i))) {
        out.holds = false;
        out.witness = ClassWitness{"two-sided-scalability", p, q, c, i, -1, ip(i) / c, iq(i)};
        return out;
      }
      if (!strictly_less(iq(i), c * ip(i))) {
        out.holds = false;
        out.witness = ClassWitness{"two-sided-scalability", p, q, c, i, -1, iq(i), c * ip(i)};
        return out;
      }
    }
  }
  return out;
}

}  // namespace fastlip
