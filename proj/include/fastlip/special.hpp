#pragma once

// Exponential integral, psi(xi) = E1(xi) - e^-xi, a bracketed scalar root
// finder and thin quadrature wrappers.

#include "fastlip/core.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

namespace fastlip {

/// E1(x) = int_x^inf e^-t / t dt for x > 0. Power series up to x = 1, modified
/// Lentz continued fraction above.
inline double expint_e1(double x) {
  detail::require(x > 0.0 && std::isfinite(x), "expint_e1: argument must be finite and > 0");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (x <= 1.0) {
    // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -x / k;
      const double add = term / k;
      sum += add;
      if (std::abs(add) < eps * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(x) - sum;
  }
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return h * std::exp(-x);
}

/// psi(xi) = E1(xi) - e^-xi.
inline double psi(double xi) {
  detail::require(xi > 0.0, "psi: xi must be > 0");
  return expint_e1(xi) - std::exp(-xi);
}

/// d psi / d xi = e^-xi (1 - 1/xi).
inline double dpsi(double xi) {
  detail::require(xi > 0.0, "dpsi: xi must be > 0");
  return std::exp(-xi) * (1.0 - 1.0 / xi);
}

inline constexpr double kRootTolerance = 1e-10;

/// Root of fn in [a, b]; fn(a) and fn(b) must differ in sign. Secant steps are
/// taken when they land inside the bracket and shrink it fast enough, bisection
/// otherwise. Stops when the bracket is narrower than tol.
inline double find_root_bracketed(const std::function<double(double)>& fn, double a, double b,
                                  double tol = kRootTolerance, int max_iters = 500) {
  detail::require(a < b, "find_root_bracketed: need a < b");
  detail::require(tol > 0.0, "find_root_bracketed: tol must be > 0");
  double fa = fn(a);
  double fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(std::signbit(fa) != std::signbit(fb))) {
    throw DomainError("find_root_bracketed: no sign change on [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  }
  double width = b - a;
  for (int it = 0; it < max_iters && b - a > tol; ++it) {
    double m = a - fa * (b - a) / (fb - fa);
    // Fall back to bisection if the secant point is outside or the last step
    // did not halve the bracket.
    if (!(m > a && m < b) || b - a > 0.5 * width) m = 0.5 * (a + b);
    width = b - a;
    const double fm = fn(m);
    if (fm == 0.0) return m;
    if (std::signbit(fm) == std::signbit(fa)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

/// Adaptive Gauss-Kronrod on a finite interval.
inline double integrate(const std::function<double(double)>& fn, double a, double b, double rel_tol = 1e-12) {
  detail::require(a <= b, "integrate: need a <= b");
  if (a == b) return 0.0;
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(fn, a, b, 20, rel_tol, &err);
}

/// int_a^inf fn(t) dt via exp-sinh quadrature.
inline double integrate_to_infinity(const std::function<double(double)>& fn, double a, double rel_tol = 1e-12) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate(fn, a, std::numeric_limits<double>::infinity(), rel_tol);
}

}  // namespace fastlip
