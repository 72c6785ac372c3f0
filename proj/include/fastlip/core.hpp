#pragma once

// Shared numeric vocabulary: vectors, boxes, the affine network scenario and
// the matrix norms every qualifying condition is written in.
//
// Gradient orientation is fixed project-wide: for f : R^n -> R^m the gradient
// is the n x m matrix with [grad f]_ij = d f_j / d x_i (row = input, column =
// output). This is the transpose of the usual Jacobian.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fastlip {

inline constexpr const char* kVersion = "0.1.0";

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// [i,j] = d f_j / d x_i.
using Gradient = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sizes of vectors/matrices do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain (nonpositive power under a log, z <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The problem has no fixed point / feasible point (e.g. rho(F) >= 1).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

inline void require_size(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected size " + std::to_string(want) +
                         ", got " + std::to_string(got));
  }
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

}  // namespace detail

/// Natural box constraints p_min <= p <= p_max on transmit powers.
struct PowerBox {
  Vector lower;
  Vector upper;

  PowerBox() = default;
  PowerBox(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) { validate(); }

  static PowerBox uniform(std::size_t n, double lo, double hi) {
    return PowerBox(Vector::Constant(static_cast<Eigen::Index>(n), lo),
                    Vector::Constant(static_cast<Eigen::Index>(n), hi));
  }

  std::size_t size() const { return static_cast<std::size_t>(lower.size()); }

  void validate() const {
    detail::require_size(upper.size(), lower.size(), "PowerBox upper");
    detail::require_finite(lower, "PowerBox lower");
    detail::require_finite(upper, "PowerBox upper");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
      detail::require(lower(i) >= 0.0, "PowerBox: p_min must be >= 0");
      detail::require(lower(i) < upper(i), "PowerBox: p_min must be < p_max");
    }
  }

  bool strictly_positive() const { return lower.size() > 0 && (lower.array() > 0.0).all(); }

  bool contains(const Vector& p) const {
    return p.size() == lower.size() && (p.array() >= lower.array()).all() &&
           (p.array() <= upper.array()).all();
  }

  Vector clamp(const Vector& p) const { return p.cwiseMax(lower).cwiseMin(upper); }
};

/// Gain matrix, SINR targets and noise floors of n transmitter/receiver pairs.
struct NetworkScenario {
  Matrix gains;  // G_ij: attenuation from transmitter j to receiver i
  Vector tau;    // SINR thresholds
  Vector eta;    // receiver noise powers
  PowerBox box;

  std::size_t size() const { return static_cast<std::size_t>(tau.size()); }

  void validate() const {
    const auto n = tau.size();
    if (n == 0) throw DimensionError("NetworkScenario: empty");
    if (gains.rows() != n || gains.cols() != n) {
      throw DimensionError("NetworkScenario: gains must be " + std::to_string(n) + "x" +
                           std::to_string(n));
    }
    detail::require_size(eta.size(), n, "NetworkScenario eta");
    detail::require_size(box.lower.size(), n, "NetworkScenario p_min");
    box.validate();
    detail::require_finite(gains, "NetworkScenario gains");
    for (Eigen::Index i = 0; i < n; ++i) {
      detail::require(gains(i, i) > 0.0, "NetworkScenario: G_ii must be > 0");
      detail::require(tau(i) > 0.0, "NetworkScenario: tau_i must be > 0");
      detail::require(eta(i) >= 0.0, "NetworkScenario: eta_i must be >= 0");
      for (Eigen::Index j = 0; j < n; ++j) {
        detail::require(gains(i, j) >= 0.0, "NetworkScenario: G_ij must be >= 0");
      }
    }
  }

  /// Zero noise is legal but breaks positivity of the affine interference map.
  bool has_zero_noise() const { return (eta.array() == 0.0).any(); }

  /// F_ij = (tau_i / G_ii) G_ij for i != j, F_ii = 0.
  Matrix normalized_gain() const {
    Matrix f = gains;
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      f.row(i) *= tau(i) / gains(i, i);
      f(i, i) = 0.0;
    }
    return f;
  }

  /// u_i = tau_i eta_i / G_ii.
  Vector noise_term() const {
    return (tau.array() * eta.array() / gains.diagonal().array()).matrix();
  }
};

/// I_i(p) = (tau_i / G_ii) (sum_{j != i} G_ij p_j + eta_i).
inline Vector affine_interference(const NetworkScenario& scn, const Vector& p) {
  detail::require_size(p.size(), static_cast<Eigen::Index>(scn.size()), "affine_interference p");
  detail::require((p.array() >= 0.0).all(), "affine_interference: negative power");
  return scn.normalized_gain() * p + scn.noise_term();
}

/// Induced l-infinity norm: max absolute row sum.
inline double norm_inf(const Matrix& m) {
  detail::require_finite(m, "norm_inf");
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Induced l-1 norm: max absolute column sum.
inline double norm_one(const Matrix& m) {
  detail::require_finite(m, "norm_one");
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

/// Eigenvalue route up to this size, power iteration above.
inline constexpr Eigen::Index kSpectralDenseLimit = 64;

inline double spectral_radius(const Matrix& m) {
  detail::require_finite(m, "spectral_radius");
  if (m.rows() != m.cols()) throw DimensionError("spectral_radius: matrix must be square");
  const auto n = m.rows();
  if (n == 0) return 0.0;
  if (n <= kSpectralDenseLimit) {
    Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  // Power iteration on |m|-shaped problems; ratio of successive norms.
  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  double estimate = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    if (std::abs(norm - estimate) <= 1e-10 * std::max(1.0, norm)) return norm;
    estimate = norm;
    v = w;
  }
  return estimate;
}

}  // namespace fastlip
