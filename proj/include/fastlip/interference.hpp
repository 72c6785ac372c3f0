#pragma once

// Interference functions p -> I(p). Models are immutable after construction
// and shared through InterferencePtr.

#include "fastlip/core.hpp"
#include "fastlip/finite_difference.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

namespace fastlip {

/// Declared function class; classifiers check the declaration on a box.
enum class InterferenceClass { standard, type2, two_sided, smoothed, custom };

inline const char* to_string(InterferenceClass c) {
  switch (c) {
    case InterferenceClass::standard:
      return "standard";
    case InterferenceClass::type2:
      return "type-II";
    case InterferenceClass::two_sided:
      return "two-sided-scalable";
    case InterferenceClass::smoothed:
      return "smoothed";
    case InterferenceClass::custom:
      return "custom";
  }
  return "custom";
}

class InterferenceFunction {
 public:
  virtual ~InterferenceFunction() = default;

  virtual std::size_t size() const = 0;
  virtual std::string name() const = 0;
  virtual InterferenceClass declared_class() const = 0;
  virtual Vector eval(const Vector& p) const = 0;

  virtual bool has_analytic_gradient() const { return false; }
  virtual bool requires_positive_input() const { return false; }

  /// grad I(p), [i,j] = d I_j / d p_i. Central differences unless overridden.
  virtual Gradient gradient(const Vector& p) const {
    return fd_gradient([this](const Vector& q) { return eval(q); }, p);
  }

  /// f(x) = ln I(e^x).
  virtual Vector log_eval(const Vector& x) const {
    const Vector v = eval(x.array().exp().matrix());
    detail::require((v.array() > 0.0).all(), name() + ": log transform needs I(p) > 0");
    return v.array().log().matrix();
  }

  /// grad f(x) = diag(p) grad I(p) diag(1 / I(p)), p = e^x.
  virtual Gradient log_gradient(const Vector& x) const {
    const Vector p = x.array().exp().matrix();
    const Vector v = eval(p);
    detail::require((v.array() > 0.0).all(), name() + ": log transform needs I(p) > 0");
    Gradient g = gradient(p);
    g = p.asDiagonal() * g;
    g = g * v.cwiseInverse().asDiagonal();
    return g;
  }

  /// Set when grad f is the same matrix everywhere (monomial models).
  virtual std::optional<Gradient> constant_log_gradient() const { return std::nullopt; }

 protected:
  void check_input(const Vector& p) const {
    detail::require_size(p.size(), static_cast<Eigen::Index>(size()), "interference input");
    detail::require_finite(p, "interference input");
    if (requires_positive_input()) {
      detail::require((p.array() > 0.0).all(), name() + ": power must be > 0");
    } else {
      detail::require((p.array() >= 0.0).all(), name() + ": negative power");
    }
  }
};

using InterferencePtr = std::shared_ptr<const InterferenceFunction>;

inline Gradient interference_gradient(const InterferenceFunction& m, const Vector& p) {
  return m.gradient(p);
}

/// The SINR-constraint map I(p) = F p + u of a NetworkScenario.
class AffineInterference final : public InterferenceFunction {
 public:
  explicit AffineInterference(NetworkScenario scn) : scn_(std::move(scn)) {
    scn_.validate();
    f_ = scn_.normalized_gain();
    u_ = scn_.noise_term();
  }

  std::size_t size() const override { return scn_.size(); }
  std::string name() const override { return "affine"; }
  InterferenceClass declared_class() const override { return InterferenceClass::standard; }
  bool has_analytic_gradient() const override { return true; }

  Vector eval(const Vector& p) const override {
    check_input(p);
    return f_ * p + u_;
  }

  Gradient gradient(const Vector& p) const override {
    check_input(p);
    return f_.transpose();
  }

  const NetworkScenario& scenario() const { return scn_; }
  const Matrix& normalized_gain() const { return f_; }
  const Vector& noise_term() const { return u_; }

 private:
  NetworkScenario scn_;
  Matrix f_;
  Vector u_;
};

/// I_i(p) = e^{b_i} prod_j p_j^{A_ij}; affine in log coordinates: f(x) = A x + b.
class MonomialInterference final : public InterferenceFunction {
 public:
  MonomialInterference(Matrix exponents, Vector log_coeffs)
      : a_(std::move(exponents)), b_(std::move(log_coeffs)) {
    if (a_.rows() != a_.cols()) throw DimensionError("MonomialInterference: A must be square");
    detail::require_size(b_.size(), a_.rows(), "MonomialInterference b");
    detail::require_finite(a_, "MonomialInterference A");
    detail::require_finite(b_, "MonomialInterference b");
  }

  std::size_t size() const override { return static_cast<std::size_t>(b_.size()); }
  std::string name() const override { return "monomial"; }
  InterferenceClass declared_class() const override {
    if ((a_.array() >= 0.0).all()) return InterferenceClass::standard;
    if ((a_.array() <= 0.0).all()) return InterferenceClass::type2;
    return InterferenceClass::two_sided;
  }
  bool has_analytic_gradient() const override { return true; }
  bool requires_positive_input() const override { return true; }

  Vector eval(const Vector& p) const override {
    check_input(p);
    return (a_ * p.array().log().matrix() + b_).array().exp().matrix();
  }

  Gradient gradient(const Vector& p) const override {
    // d I_j / d p_i = A_ji I_j / p_i
    const Vector v = eval(p);
    Gradient g = a_.transpose();
    g = p.cwiseInverse().asDiagonal() * g;
    return g * v.asDiagonal();
  }

  Vector log_eval(const Vector& x) const override {
    detail::require_size(x.size(), b_.size(), "monomial log input");
    return a_ * x + b_;
  }

  Gradient log_gradient(const Vector& x) const override {
    detail::require_size(x.size(), b_.size(), "monomial log input");
    return a_.transpose();
  }

  std::optional<Gradient> constant_log_gradient() const override { return Gradient(a_.transpose()); }

  const Matrix& exponents() const { return a_; }
  const Vector& log_coefficients() const { return b_; }

 private:
  Matrix a_;
  Vector b_;
};

/// I_i(p) = c_i / (sum_{j != i} G_ij p_j + eta_i): keeps the signal-interference
/// product constant. Type-II standard when eta > 0.
class OpportunisticInterference final : public InterferenceFunction {
 public:
  OpportunisticInterference(Matrix gains, Vector eta, Vector c)
      : g_(std::move(gains)), eta_(std::move(eta)), c_(std::move(c)) {
    const auto n = c_.size();
    if (g_.rows() != n || g_.cols() != n) throw DimensionError("OpportunisticInterference: gains shape");
    detail::require_size(eta_.size(), n, "OpportunisticInterference eta");
    detail::require((c_.array() > 0.0).all(), "OpportunisticInterference: c must be > 0");
    detail::require((eta_.array() >= 0.0).all(), "OpportunisticInterference: eta must be >= 0");
    detail::require((g_.array() >= 0.0).all(), "OpportunisticInterference: gains must be >= 0");
    g_.diagonal().setZero();
  }

  std::size_t size() const override { return static_cast<std::size_t>(c_.size()); }
  std::string name() const override { return "opportunistic"; }
  InterferenceClass declared_class() const override { return InterferenceClass::type2; }
  bool has_analytic_gradient() const override { return true; }

  Vector eval(const Vector& p) const override {
    check_input(p);
    const Vector denom = g_ * p + eta_;
    detail::require((denom.array() > 0.0).all(), "opportunistic: zero interference");
    return (c_.array() / denom.array()).matrix();
  }

  Gradient gradient(const Vector& p) const override {
    check_input(p);
    const Vector denom = g_ * p + eta_;
    detail::require((denom.array() > 0.0).all(), "opportunistic: zero interference");
    // d I_j / d p_i = -c_j G_ji / denom_j^2
    const Vector w = -(c_.array() / denom.array().square()).matrix();
    return g_.transpose() * w.asDiagonal();
  }

  const Matrix& gains() const { return g_; }
  const Vector& noise() const { return eta_; }
  const Vector& numerators() const { return c_; }

 private:
  Matrix g_;
  Vector eta_;
  Vector c_;
};

/// I(p) = k for all p.
class ConstantInterference final : public InterferenceFunction {
 public:
  explicit ConstantInterference(Vector k) : k_(std::move(k)) {
    detail::require_finite(k_, "ConstantInterference");
  }

  std::size_t size() const override { return static_cast<std::size_t>(k_.size()); }
  std::string name() const override { return "constant"; }
  InterferenceClass declared_class() const override {
    return (k_.array() > 0.0).all() ? InterferenceClass::standard : InterferenceClass::custom;
  }
  bool has_analytic_gradient() const override { return true; }

  Vector eval(const Vector& p) const override {
    check_input(p);
    return k_;
  }
  Gradient gradient(const Vector& p) const override {
    check_input(p);
    return Gradient::Zero(p.size(), k_.size());
  }

 private:
  Vector k_;
};

/// Closure-backed model; gradient by central differences unless supplied.
class CustomInterference final : public InterferenceFunction {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using GradFn = std::function<Gradient(const Vector&)>;

  CustomInterference(std::string name, std::size_t n, InterferenceClass declared, EvalFn eval,
                     GradFn grad = {}, bool positive_domain = false)
      : name_(std::move(name)),
        n_(n),
        declared_(declared),
        eval_(std::move(eval)),
        grad_(std::move(grad)),
        positive_domain_(positive_domain) {}

  std::size_t size() const override { return n_; }
  std::string name() const override { return name_; }
  InterferenceClass declared_class() const override { return declared_; }
  bool has_analytic_gradient() const override { return static_cast<bool>(grad_); }
  bool requires_positive_input() const override { return positive_domain_; }

  Vector eval(const Vector& p) const override {
    check_input(p);
    return eval_(p);
  }
  Gradient gradient(const Vector& p) const override {
    check_input(p);
    if (grad_) return grad_(p);
    return InterferenceFunction::gradient(p);
  }

 private:
  std::string name_;
  std::size_t n_;
  InterferenceClass declared_;
  EvalFn eval_;
  GradFn grad_;
  bool positive_domain_;
};

}  // namespace fastlip
