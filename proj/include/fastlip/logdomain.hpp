#pragma once

// Problems on Fast-Lipschitz form
//
//     min f0(x)  s.t.  x >= f(x),   lower <= x <= upper,
//
// built from an interference model and a cost. Three coordinate systems are
// supported:
//   - log power     x = ln p,  f(x) = ln I(e^x),  f0(x) = kappa(e^x)
//   - power         x = p,     f = I,             f0 = kappa
//   - scaled log    y = S x with S = diag(s): g(y) = S f(S^-1 y), g0(y) = f0(S^-1 y)
// The qualifying conditions only look at f, f0 and their gradients, so every
// check in qualifiers.hpp works on any of them.

#include "fastlip/classify.hpp"
#include "fastlip/cost.hpp"
#include "fastlip/interference.hpp"
#include "fastlip/sampling.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace fastlip {

enum class Coordinates { log_power, power };

class FlProblem {
 public:
  FlProblem(InterferencePtr model, CostModel cost, PowerBox box, Coordinates coords)
      : model_(std::move(model)), cost_(std::move(cost)), box_(std::move(box)), coords_(coords) {
    if (!model_) throw DomainError("FlProblem: null model");
    box_.validate();
    detail::require_size(static_cast<Eigen::Index>(box_.size()),
                         static_cast<Eigen::Index>(model_->size()), "FlProblem box");
    // Both coordinate systems sample log-uniformly, so p_min > 0 everywhere.
    detail::require(box_.strictly_positive(), "FlProblem: box must be strictly positive");
  }

  std::size_t size() const { return model_->size(); }
  Coordinates coordinates() const { return coords_; }
  bool is_scaled() const { return scale_.has_value(); }
  const std::optional<Vector>& scale() const { return scale_; }
  const InterferenceFunction& model() const { return *model_; }
  const InterferencePtr& model_ptr() const { return model_; }
  const CostModel& cost() const { return cost_; }
  const PowerBox& power_box() const { return box_; }

  /// Problem coordinates -> power.
  Vector to_power(const Vector& x) const {
    Vector base = unscale(x);
    return coords_ == Coordinates::log_power ? Vector(base.array().exp().matrix()) : base;
  }

  /// Power -> problem coordinates.
  Vector from_power(const Vector& p) const {
    Vector base = coords_ == Coordinates::log_power ? Vector(p.array().log().matrix()) : p;
    return rescale(base);
  }

  Vector lower() const { return from_power(box_.lower); }
  Vector upper() const { return from_power(box_.upper); }

  /// Maps the unit cube onto the box, uniformly in log power.
  Vector point_from_unit(const Vector& u) const {
    if (coords_ == Coordinates::log_power) {
      return rescale(map_uniform(box_.lower.array().log().matrix(), box_.upper.array().log().matrix(), u));
    }
    return rescale(map_log_uniform(box_.lower, box_.upper, u));
  }

  /// Corners (n <= 10) followed by `count` seeded draws, in problem coordinates.
  std::vector<Vector> sample_points(std::size_t count, std::uint64_t seed) const {
    std::vector<Vector> out;
    for (const Vector& u : unit_cloud(static_cast<Eigen::Index>(size()), count, seed)) {
      out.push_back(point_from_unit(u));
    }
    return out;
  }

  Vector constraint(const Vector& x) const {
    const Vector base = unscale(x);
    Vector v = coords_ == Coordinates::log_power ? model_->log_eval(base) : model_->eval(base);
    return rescale(v);
  }

  Gradient constraint_gradient(const Vector& x) const {
    const Vector base = unscale(x);
    Gradient g = coords_ == Coordinates::log_power ? model_->log_gradient(base) : model_->gradient(base);
    if (!scale_) return g;
    // grad g(y) = S^-1 grad f(x) S
    return scale_->cwiseInverse().asDiagonal() * g * scale_->asDiagonal();
  }

  Vector objective(const Vector& x) const { return cost_.eval(to_power(x)); }

  Gradient objective_gradient(const Vector& x) const {
    const Vector p = to_power(x);
    Gradient g = cost_.gradient(p);
    if (coords_ == Coordinates::log_power) g = p.asDiagonal() * g;  // diag(p) grad kappa(p)
    if (scale_) g = scale_->cwiseInverse().asDiagonal() * g;
    return g;
  }

  /// grad f if it does not depend on x.
  std::optional<Gradient> constant_constraint_gradient() const {
    if (coords_ != Coordinates::log_power) return std::nullopt;
    auto g = model_->constant_log_gradient();
    if (g && scale_) *g = scale_->cwiseInverse().asDiagonal() * *g * scale_->asDiagonal();
    return g;
  }

  /// w such that f0(x) = h(w^T x) with h strictly increasing, if the cost has that form.
  std::optional<Vector> objective_linear_weights() const {
    if (coords_ != Coordinates::log_power) return std::nullopt;
    const auto kind = cost_.kind();
    if (kind != CostModel::Kind::weighted_log_sum && kind != CostModel::Kind::weighted_power_product) {
      return std::nullopt;
    }
    Vector w = *cost_.weights();
    if (scale_) w = (w.array() / scale_->array()).matrix();
    return w;
  }

  /// Returns a copy in coordinates y = diag(s) x. Only log-power problems can be scaled.
  FlProblem scaled(const Vector& s) const {
    detail::require(coords_ == Coordinates::log_power && !scale_,
                    "FlProblem::scaled: needs an unscaled log-power problem");
    detail::require_size(s.size(), static_cast<Eigen::Index>(size()), "scale vector");
    detail::require((s.array() > 0.0).all(), "FlProblem::scaled: s must be > 0");
    FlProblem out = *this;
    out.scale_ = s;
    return out;
  }

 private:
  Vector unscale(const Vector& y) const {
    detail::require_size(y.size(), static_cast<Eigen::Index>(size()), "problem point");
    return scale_ ? Vector((y.array() / scale_->array()).matrix()) : y;
  }
  Vector rescale(const Vector& x) const {
    return scale_ ? Vector((x.array() * scale_->array()).matrix()) : x;
  }

  InterferencePtr model_;
  CostModel cost_;
  PowerBox box_;
  Coordinates coords_;
  std::optional<Vector> scale_;
};

using LogProblem = FlProblem;

/// x = ln p, f(x) = ln I(e^x), f0(x) = kappa(e^x). Fixed points satisfy e^x = I(e^x).
inline FlProblem to_log_problem(InterferencePtr model, CostModel cost, const PowerBox& box) {
  if (!box.strictly_positive()) throw DomainError("to_log_problem: box must be strictly positive");
  return FlProblem(std::move(model), std::move(cost), box, Coordinates::log_power);
}

/// The problem in power coordinates, as used for non-monotone (smoothed) constraints.
inline FlProblem to_power_problem(InterferencePtr model, CostModel cost, const PowerBox& box) {
  return FlProblem(std::move(model), std::move(cost), box, Coordinates::power);
}

inline FlProblem scale_problem(const FlProblem& lp, const Vector& s) { return lp.scaled(s); }

struct ShrinkingReport {
  double max_ratio = 0.0;
  std::optional<std::pair<Vector, Vector>> witness;  // pair attaining max_ratio
  bool holds = true;                                 // max_ratio < 1
  std::size_t pairs_used = 0;
  std::size_t skipped = 0;  // degenerate x == y pairs
};

/// max ||f(x) - f(y)||_inf / ||x - y||_inf over seeded pairs; corners are paired
/// with the opposite corner first.
inline ShrinkingReport check_shrinking(const FlProblem& lp, std::size_t pairs, std::uint64_t seed) {
  if (pairs < 1) throw DomainError("check_shrinking: pairs must be >= 1");
  const auto n = static_cast<Eigen::Index>(lp.size());
  std::vector<std::pair<Vector, Vector>> cloud;
  for (const Vector& u : unit_corners(n)) {
    cloud.emplace_back(lp.point_from_unit(u), lp.point_from_unit(Vector::Ones(n) - u));
  }
  UnitSampler s(seed);
  for (std::size_t k = 0; k < pairs; ++k) {
    Vector a = lp.point_from_unit(s.point(n));
    Vector b = lp.point_from_unit(s.point(n));
    cloud.emplace_back(std::move(a), std::move(b));
  }
  ShrinkingReport r;
  for (const auto& [x, y] : cloud) {
    const double dx = (x - y).lpNorm<Eigen::Infinity>();
    if (dx == 0.0) {
      ++r.skipped;
      continue;
    }
    ++r.pairs_used;
    const double ratio = (lp.constraint(x) - lp.constraint(y)).lpNorm<Eigen::Infinity>() / dx;
    if (!r.witness || ratio > r.max_ratio) {
      r.max_ratio = ratio;
      r.witness = std::make_pair(x, y);
    }
  }
  r.holds = r.max_ratio < 1.0;
  return r;
}

struct GradNormReport {
  double max_norm1 = 0.0;
  std::optional<Vector> witness;
  bool holds = true;  // max_norm1 < 1
  std::size_t samples = 0;
};

/// max ||grad f(x)||_1 over corners and seeded draws.
inline GradNormReport check_grad_norm1(const FlProblem& lp, std::size_t samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("check_grad_norm1: samples must be >= 1");
  GradNormReport r;
  for (const Vector& x : lp.sample_points(samples, seed)) {
    ++r.samples;
    const double v = norm_one(lp.constraint_gradient(x));
    if (!r.witness || v > r.max_norm1) {
      r.max_norm1 = v;
      r.witness = x;
    }
  }
  r.holds = r.max_norm1 < 1.0;
  return r;
}

}  // namespace fastlip
