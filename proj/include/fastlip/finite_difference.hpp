#pragma once

#include "fastlip/core.hpp"

#include <cmath>
#include <functional>

namespace fastlip {

enum class FdScheme {
  central,     // (f(x+h) - f(x-h)) / 2h
  five_point,  // fourth-order central stencil
};

/// Default step: 1e-6 * max(1, |x_i|).
inline double default_fd_step(double xi) { return 1e-6 * std::max(1.0, std::abs(xi)); }

/// Finite-difference gradient of fn at x in the project orientation
/// ([i,j] = d fn_j / d x_i). `relative_step` scales max(1, |x_i|).
template <typename Fn>
Gradient fd_gradient(const Fn& fn, const Vector& x, double relative_step = 1e-6,
                     FdScheme scheme = FdScheme::central) {
  const Vector f0 = fn(x);
  Gradient g(x.size(), f0.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = relative_step * std::max(1.0, std::abs(x(i)));
    const double xi = x(i);
    auto at = [&](double offset) {
      xp(i) = xi + offset;
      Vector v = fn(xp);
      xp(i) = xi;
      if (v.size() != f0.size()) throw DimensionError("fd_gradient: output size changed");
      return v;
    };
    if (scheme == FdScheme::central) {
      g.row(i) = ((at(h) - at(-h)) / (2.0 * h)).transpose();
    } else {
      const Vector d = -at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h);
      g.row(i) = (d / (12.0 * h)).transpose();
    }
  }
  return g;
}

}  // namespace fastlip
