#pragma once

// Outage-thresholded power control under fading. With h(v) = v for v <= b and 0
// above, the smoothed map is
//
//     Phi(x) = E[h(x / Theta)] = x T(x / b),   T(z) = int_z^inf theta(y) / y dy,
//
// and dPhi/dx = Omega(x / b) with Omega(z) = T(z) - theta(z).

#include "fastlip/interference.hpp"
#include "fastlip/logdomain.hpp"
#include "fastlip/qualifiers.hpp"
#include "fastlip/special.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fastlip {

/// sqrt(pi / 2): Rayleigh Omega(0+) for lambda = 1.
inline constexpr double kSqrtHalfPi = 1.2533141373155002512;

/// Distribution of the fading coefficient Theta. Models are named by the
/// distribution of Theta itself.
class FadingModel {
 public:
  enum class Kind { rayleigh, exponential, custom };

  /// theta(y) = y / lambda^2 exp(-y^2 / (2 lambda^2)).
  static FadingModel rayleigh(double lambda) {
    detail::require(lambda > 0.0 && std::isfinite(lambda), "rayleigh: lambda must be > 0");
    return FadingModel(Kind::rayleigh, lambda);
  }

  /// theta(y) = lambda exp(-lambda y).
  static FadingModel exponential(double lambda) {
    detail::require(lambda > 0.0 && std::isfinite(lambda), "exponential: lambda must be > 0");
    return FadingModel(Kind::exponential, lambda);
  }

  /// Arbitrary pdf supported on [0, cutoff]; mass beyond the cutoff is ignored,
  /// so it should be chosen where the tail of theta(y)/y is negligible.
  static FadingModel custom(std::string name, std::function<double(double)> pdf, double cutoff) {
    detail::require(cutoff > 0.0 && std::isfinite(cutoff), "custom fading: cutoff must be > 0");
    FadingModel m(Kind::custom, 0.0);
    m.name_ = std::move(name);
    m.pdf_ = std::move(pdf);
    m.cutoff_ = cutoff;
    for (int k = 0; k <= 1000; ++k) {
      const double v = m.pdf_(cutoff * k / 1000.0);
      detail::require(std::isfinite(v) && v >= 0.0, "custom fading: pdf must be finite and >= 0");
    }
    const double mass = integrate(m.pdf_, 0.0, cutoff, 1e-10);
    if (std::abs(mass - 1.0) > 1e-6) {
      throw DomainError("custom fading: pdf integrates to " + std::to_string(mass) + ", not 1");
    }
    return m;
  }

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double cutoff() const { return cutoff_; }
  const std::string& name() const { return name_; }

  double pdf(double y) const {
    if (y < 0.0) return 0.0;
    switch (kind_) {
      case Kind::rayleigh:
        return y / (lambda_ * lambda_) * std::exp(-y * y / (2.0 * lambda_ * lambda_));
      case Kind::exponential:
        return lambda_ * std::exp(-lambda_ * y);
      case Kind::custom:
        return y > cutoff_ ? 0.0 : pdf_(y);
    }
    return 0.0;
  }

  /// T(z) = int_z^inf theta(y) / y dy; closed form for Rayleigh and exponential.
  double tail(double z) const {
    detail::require(z > 0.0, "fading tail: z must be > 0");
    switch (kind_) {
      case Kind::rayleigh:
        return kSqrtHalfPi / lambda_ * std::erfc(z / (std::numbers::sqrt2 * lambda_));
      case Kind::exponential:
        return lambda_ * expint_e1(lambda_ * z);
      case Kind::custom:
        return tail_quadrature(z);
    }
    return 0.0;
  }

  /// T(z) by numerical quadrature only, independent of the closed forms.
  double tail_quadrature(double z) const {
    detail::require(z > 0.0, "fading tail: z must be > 0");
    auto integrand = [this](double y) { return pdf(y) / y; };
    if (kind_ == Kind::custom) return z >= cutoff_ ? 0.0 : integrate(integrand, z, cutoff_, 1e-12);
    return integrate_to_infinity(integrand, z, 1e-12);
  }

  /// Omega(z) = T(z) - theta(z).
  double omega(double z) const {
    detail::require(z > 0.0, "omega: z must be > 0");
    return tail(z) - pdf(z);
  }

 private:
  FadingModel(Kind k, double lambda)
      : kind_(k), lambda_(lambda), name_(k == Kind::rayleigh ? "rayleigh" : k == Kind::exponential ? "exponential" : "custom") {}

  Kind kind_;
  double lambda_;
  std::string name_;
  std::function<double(double)> pdf_;
  double cutoff_ = std::numeric_limits<double>::infinity();
};

inline double tail_integral(const FadingModel& fading, double z) { return fading.tail(z); }
inline double omega(const FadingModel& fading, double z) { return fading.omega(z); }

/// Phi(x) = x T(x / b); Phi(0) = 0.
inline double smoothed_power(const FadingModel& fading, double x, double b) {
  detail::require(b > 0.0, "smoothed_power: b must be > 0");
  detail::require(x >= 0.0, "smoothed_power: x must be >= 0");
  if (x == 0.0) return 0.0;
  return x * fading.tail(x / b);
}

/// The outage cap of h: f never exceeds b.
inline double outage_cap(double x, double b) { return x <= b ? x : 0.0; }

inline constexpr double kDefaultZmin = 1e-3;

/// f_j(p) = Phi_j(I_j(p)) over an underlying interference model.
class SmoothedInterference final : public InterferenceFunction {
 public:
  SmoothedInterference(InterferencePtr base, std::vector<FadingModel> fadings, double b,
                       double zmin = kDefaultZmin)
      : base_(std::move(base)), fadings_(std::move(fadings)), b_(b), zmin_(zmin) {
    if (!base_) throw DomainError("SmoothedInterference: null base model");
    if (fadings_.size() == 1 && base_->size() > 1) fadings_.resize(base_->size(), fadings_.front());
    if (fadings_.size() != base_->size()) throw DimensionError("SmoothedInterference: one fading per link");
    detail::require(b_ > 0.0, "SmoothedInterference: b must be > 0");
    detail::require(zmin_ > 0.0, "SmoothedInterference: zmin must be > 0");
  }

  std::size_t size() const override { return base_->size(); }
  std::string name() const override { return "smoothed(" + base_->name() + ")"; }
  InterferenceClass declared_class() const override { return InterferenceClass::smoothed; }
  bool has_analytic_gradient() const override { return base_->has_analytic_gradient(); }
  bool requires_positive_input() const override { return base_->requires_positive_input(); }

  Vector eval(const Vector& p) const override {
    const Vector z = load(p);
    Vector f(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) f(j) = b_ * z(j) * fadings_[static_cast<std::size_t>(j)].tail(z(j));
    return f;
  }

  /// [i,j] = Omega_j(I_j / b) dI_j / dp_i.
  Gradient gradient(const Vector& p) const override {
    const Vector w = omegas(p);
    return base_->gradient(p) * w.asDiagonal();
  }

  /// Omega_j(I_j(p) / b) for every link.
  Vector omegas(const Vector& p) const {
    const Vector z = load(p);
    Vector w(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) w(j) = fadings_[static_cast<std::size_t>(j)].omega(z(j));
    return w;
  }

  const InterferenceFunction& base() const { return *base_; }
  const InterferencePtr& base_ptr() const { return base_; }
  const std::vector<FadingModel>& fadings() const { return fadings_; }
  double cap() const { return b_; }
  double zmin() const { return zmin_; }

 private:
  /// z = I(p) / b, rejecting z < zmin.
  Vector load(const Vector& p) const {
    const Vector z = base_->eval(p) / b_;
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      if (!(z(j) >= zmin_)) {
        throw DomainError(name() + ": I_" + std::to_string(j) + "(p)/b = " + std::to_string(z(j)) +
                          " below zmin = " + std::to_string(zmin_));
      }
    }
    return z;
  }

  InterferencePtr base_;
  std::vector<FadingModel> fadings_;
  double b_;
  double zmin_;
};

// Exponential fading worst case.

/// The root t in (0, 1) of psi(t) = -psi(1).
inline double xi1(double tol = kRootTolerance) {
  const double target = -psi(1.0);
  return find_root_bracketed([target](double t) { return psi(t) - target; }, 1e-6, 1.0, tol);
}

/// sigma(lambda) = max_{z >= zmin} |Omega(z, lambda)| for exponential fading.
inline double sigma_zmin(double zmin, double lambda) {
  detail::require(zmin > 0.0, "sigma_zmin: zmin must be > 0");
  detail::require(lambda > 0.0, "sigma_zmin: lambda must be > 0");
  static const double x1 = xi1();
  if (lambda < x1 / zmin) return lambda * psi(lambda * zmin);
  if (lambda <= 1.0 / zmin) return -lambda * psi(1.0);
  return -lambda * psi(lambda * zmin);
}

/// d/du [u psi(u)] = psi(u) + e^-u (u - 1).
inline double sigma_stationary_equation(double u) { return psi(u) + std::exp(-u) * (u - 1.0); }

struct StationaryPoints {
  double v1;
  double v2;
};

/// Roots of psi(u) + e^-u (u - 1) = 0 in (0.01, 0.5) and (0.5, 5).
inline StationaryPoints sigma_stationary_points(double tol = kRootTolerance) {
  return {find_root_bracketed(sigma_stationary_equation, 0.01, 0.5, tol),
          find_root_bracketed(sigma_stationary_equation, 0.5, 5.0, tol)};
}

/// sup_z |Omega(z)| for Rayleigh fading: attained as z -> 0.
inline double rayleigh_max_abs_omega(double lambda) {
  detail::require(lambda > 0.0, "rayleigh_max_abs_omega: lambda must be > 0");
  return kSqrtHalfPi / lambda;
}

/// max_{z >= zmin} |Omega(z)|. Rayleigh has its only interior extremum at
/// sqrt(2) lambda; custom models use a log-spaced grid up to the cutoff.
inline double max_abs_omega(const FadingModel& fading, double zmin) {
  detail::require(zmin > 0.0, "max_abs_omega: zmin must be > 0");
  switch (fading.kind()) {
    case FadingModel::Kind::rayleigh: {
      const double zc = std::numbers::sqrt2 * fading.lambda();
      const double at_min = std::abs(fading.omega(zmin));
      return zmin <= zc ? std::max(at_min, std::abs(fading.omega(zc))) : at_min;
    }
    case FadingModel::Kind::exponential:
      return sigma_zmin(zmin, fading.lambda());
    case FadingModel::Kind::custom: {
      double best = 0.0;
      if (zmin >= fading.cutoff()) return best;
      const int n = 4000;
      const double la = std::log(zmin);
      const double lb = std::log(fading.cutoff());
      for (int k = 0; k <= n; ++k) best = std::max(best, std::abs(fading.omega(std::exp(la + (lb - la) * k / n))));
      return best;
    }
  }
  return 0.0;
}

struct Corollary1Report {
  Verdict verdict = Verdict::holds;
  double alpha = 0.0;
  double omega_max = 0.0;    // max over links and z >= zmin of |Omega|
  double base_margin = 0.0;  // min_p q/(1+q) - alpha ||grad I(p)||_inf
  std::optional<Vector> worst_point;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

/// The smoothed problem is Fast-Lipschitz when max |Omega| <= alpha and the
/// underlying problem (power coordinates) satisfies
/// alpha ||grad I(p)||_inf < q(p) / (1 + q(p)) on the sample cloud.
inline Corollary1Report corollary1_check(const FlProblem& base, const std::vector<FadingModel>& fadings,
                                         double zmin, double alpha, std::size_t samples, std::uint64_t seed) {
  detail::require(alpha > 0.0, "corollary1_check: alpha must be > 0");
  detail::require(!fadings.empty(), "corollary1_check: no fading models");
  detail::require(base.coordinates() == Coordinates::power && !base.is_scaled(),
                  "corollary1_check: base problem must be in power coordinates");
  Corollary1Report r;
  r.alpha = alpha;
  r.seed = seed;
  for (const auto& f : fadings) r.omega_max = std::max(r.omega_max, max_abs_omega(f, zmin));
  const auto pts = base.sample_points(samples, seed);
  r.samples = pts.size();
  bool seen = false;
  for (const Vector& p : pts) {
    const QRatio q = q_ratio(base.objective_gradient(p));
    if (!q.applicable || q.value <= 0.0) {
      r.verdict = Verdict::inapplicable;
      r.worst_point = p;
      r.detail = "q(p) = 0 for the base cost";
      return r;
    }
    const double m = q.value / (1.0 + q.value) - alpha * norm_inf(base.constraint_gradient(p));
    if (!seen || m < r.base_margin) {
      r.base_margin = m;
      r.worst_point = p;
    }
    seen = true;
  }
  if (!(r.base_margin > 0.0)) {
    r.verdict = Verdict::fails;
    r.detail = "base problem violates alpha ||grad I||_inf < q/(1+q)";
  } else if (!(r.omega_max <= alpha)) {
    r.verdict = Verdict::fails;
    r.detail = "max |Omega| = " + std::to_string(r.omega_max) + " exceeds alpha";
  }
  return r;
}

struct SubhomogeneityReport {
  bool holds = true;
  double worst_slack = 0.0;  // min over the grid of the two inequality slacks, relative to Phi(x)
  double witness_x = 0.0;
  double witness_a = 0.0;
  std::size_t points = 0;
};

/// Checks e^-|a| Phi(x) <= Phi(e^a x) <= e^|a| Phi(x) on a log-spaced x grid
/// and a uniform a grid.
inline SubhomogeneityReport absolute_subhomogeneity_check(const FadingModel& fading, double b, double x_lo,
                                                          double x_hi, double a_max, int nx = 200, int na = 81) {
  detail::require(x_lo > 0.0 && x_lo < x_hi, "absolute_subhomogeneity_check: bad x range");
  detail::require(a_max > 0.0 && nx >= 2 && na >= 2, "absolute_subhomogeneity_check: bad grid");
  SubhomogeneityReport r;
  bool seen = false;
  for (int ix = 0; ix < nx; ++ix) {
    const double x = std::exp(std::log(x_lo) + (std::log(x_hi) - std::log(x_lo)) * ix / (nx - 1));
    const double phi = smoothed_power(fading, x, b);
    for (int ia = 0; ia < na; ++ia) {
      const double a = -a_max + 2.0 * a_max * ia / (na - 1);
      const double scaled = smoothed_power(fading, std::exp(a) * x, b);
      const double k = std::exp(std::abs(a));
      const double slack = std::min(scaled - phi / k, k * phi - scaled) / (phi > 0.0 ? phi : 1.0);
      ++r.points;
      if (!seen || slack < r.worst_slack) {
        r.worst_slack = slack;
        r.witness_x = x;
        r.witness_a = a;
      }
      seen = true;
    }
  }
  r.holds = r.worst_slack >= -kStrictSlack;
  return r;
}

}  // namespace fastlip
