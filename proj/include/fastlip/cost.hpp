#pragma once

// Cost functions kappa(p) for min kappa(p) s.t. p >= I(p).

#include "fastlip/core.hpp"
#include "fastlip/finite_difference.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>

namespace fastlip {

/// Strictly increasing scalar map h used by the weighted power-product cost.
class ScalarTransform {
 public:
  enum class Kind { identity, log, custom };

  static ScalarTransform identity() { return ScalarTransform(Kind::identity); }
  static ScalarTransform log() { return ScalarTransform(Kind::log); }
  static ScalarTransform custom(std::string name, std::function<double(double)> value,
                                std::function<double(double)> derivative) {
    ScalarTransform t(Kind::custom);
    t.name_ = std::move(name);
    t.value_ = std::move(value);
    t.derivative_ = std::move(derivative);
    return t;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  double operator()(double z) const {
    switch (kind_) {
      case Kind::identity:
        return z;
      case Kind::log:
        detail::require(z > 0.0, "ScalarTransform log: argument must be > 0");
        return std::log(z);
      case Kind::custom:
        return value_(z);
    }
    return z;
  }

  double derivative(double z) const {
    switch (kind_) {
      case Kind::identity:
        return 1.0;
      case Kind::log:
        detail::require(z > 0.0, "ScalarTransform log: argument must be > 0");
        return 1.0 / z;
      case Kind::custom:
        return derivative_(z);
    }
    return 1.0;
  }

 private:
  explicit ScalarTransform(Kind k)
      : kind_(k), name_(k == Kind::identity ? "identity" : k == Kind::log ? "log" : "custom") {}

  Kind kind_;
  std::string name_;
  std::function<double(double)> value_;
  std::function<double(double)> derivative_;
};

class CostModel {
 public:
  enum class Kind { identity_vector, sum, weighted_log_sum, weighted_power_product, custom };

  using EvalFn = std::function<Vector(const Vector&)>;
  using GradFn = std::function<Gradient(const Vector&)>;

  /// kappa(p) = p (vector cost, Pareto sense).
  static CostModel identity_vector() { return CostModel(Kind::identity_vector); }

  /// kappa(p) = 1^T p.
  static CostModel sum() { return CostModel(Kind::sum); }

  /// kappa(p) = s^T ln p.
  static CostModel weighted_log_sum(Vector s) {
    CostModel c(Kind::weighted_log_sum);
    c.set_weights(std::move(s));
    return c;
  }

  /// kappa(p) = h(prod_i p_i^{s_i}).
  static CostModel weighted_power_product(Vector s, ScalarTransform h = ScalarTransform::identity()) {
    CostModel c(Kind::weighted_power_product);
    c.set_weights(std::move(s));
    c.h_ = std::move(h);
    return c;
  }

  /// Arbitrary cost with `outputs` components; gradient falls back to central differences.
  static CostModel custom(std::string name, EvalFn eval, std::size_t outputs, GradFn grad = {}) {
    CostModel c(Kind::custom);
    c.name_ = std::move(name);
    c.eval_ = std::move(eval);
    c.grad_ = std::move(grad);
    c.custom_outputs_ = outputs;
    return c;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const std::optional<Vector>& weights() const { return s_; }
  const ScalarTransform& transform() const { return h_; }

  /// Number of cost components m for an n-dimensional power vector.
  std::size_t output_size(std::size_t n) const {
    switch (kind_) {
      case Kind::identity_vector:
        return n;
      case Kind::custom:
        return custom_outputs_;
      default:
        return 1;
    }
  }

  bool has_analytic_gradient() const { return kind_ != Kind::custom || static_cast<bool>(grad_); }

  /// True when kappa needs p > 0 (log-based forms).
  bool requires_positive_input() const {
    return kind_ == Kind::weighted_log_sum || kind_ == Kind::weighted_power_product;
  }

  Vector eval(const Vector& p) const {
    check_input(p);
    switch (kind_) {
      case Kind::identity_vector:
        return p;
      case Kind::sum:
        return Vector::Constant(1, p.sum());
      case Kind::weighted_log_sum:
        return Vector::Constant(1, s_->dot(p.array().log().matrix()));
      case Kind::weighted_power_product: {
        const double log_z = s_->dot(p.array().log().matrix());
        if (h_.kind() == ScalarTransform::Kind::log) return Vector::Constant(1, log_z);
        return Vector::Constant(1, h_(std::exp(log_z)));
      }
      case Kind::custom:
        return eval_(p);
    }
    return {};
  }

  /// n x m gradient in project orientation.
  Gradient gradient(const Vector& p) const {
    check_input(p);
    const auto n = p.size();
    switch (kind_) {
      case Kind::identity_vector:
        return Gradient::Identity(n, n);
      case Kind::sum:
        return Gradient::Ones(n, 1);
      case Kind::weighted_log_sum:
        return (s_->array() / p.array()).matrix();
      case Kind::weighted_power_product: {
        const double log_z = s_->dot(p.array().log().matrix());
        // d h(z)/dp_i = h'(z) z s_i / p_i; for h = log this is s_i / p_i.
        const double scale =
            h_.kind() == ScalarTransform::Kind::log ? 1.0 : h_.derivative(std::exp(log_z)) * std::exp(log_z);
        return (scale * s_->array() / p.array()).matrix();
      }
      case Kind::custom:
        if (grad_) return grad_(p);
        return fd_gradient([this](const Vector& q) { return eval_(q); }, p);
    }
    return {};
  }

 private:
  explicit CostModel(Kind k) : kind_(k), name_(kind_name(k)) {}

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::identity_vector:
        return "identity-vector";
      case Kind::sum:
        return "sum";
      case Kind::weighted_log_sum:
        return "weighted-log-sum";
      case Kind::weighted_power_product:
        return "weighted-power-product";
      case Kind::custom:
        return "custom";
    }
    return "custom";
  }

  void set_weights(Vector s) {
    detail::require_finite(s, "CostModel weights");
    detail::require(s.size() > 0 && (s.array() > 0.0).all(), "CostModel: weights s must be > 0");
    s_ = std::move(s);
  }

  void check_input(const Vector& p) const {
    detail::require_finite(p, "CostModel input");
    if (s_) detail::require_size(p.size(), s_->size(), "CostModel input");
    if (requires_positive_input()) {
      detail::require((p.array() > 0.0).all(), "CostModel " + name_ + ": power must be > 0");
    }
  }

  Kind kind_;
  std::string name_;
  std::optional<Vector> s_;
  ScalarTransform h_ = ScalarTransform::identity();
  EvalFn eval_;
  GradFn grad_;
  std::size_t custom_outputs_ = 1;
};

inline Vector cost_eval(const CostModel& c, const Vector& p) { return c.eval(p); }
inline Gradient cost_gradient(const CostModel& c, const Vector& p) { return c.gradient(p); }

}  // namespace fastlip
