#pragma once

// Data behind the smoothing figures, plus the omega/sigma/psi curves of the
// CLI. Grids are generated from integer indices so output is byte-stable.

#include "fastlip/io.hpp"
#include "fastlip/smoothing.hpp"
#include "fastlip/special.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fastlip {

/// Rayleigh parameters drawn in the Phi and Omega figures.
inline const std::vector<double>& figure_lambdas() {
  static const std::vector<double> l{0.5, 1.0, kSqrtHalfPi, 2.0};
  return l;
}

inline std::string lambda_label(const std::string& prefix, double lambda) {
  return prefix + "_lambda_" + format_number(lambda);
}

/// Phi(x) for Rayleigh fading, b = 1, x = 0.01 .. 5 in steps of 0.01, with h(x).
inline Table figure1(double b = 1.0) {
  Table t;
  t.header = {"x", "h"};
  for (double l : figure_lambdas()) t.header.push_back(lambda_label("phi", l));
  for (int k = 1; k <= 500; ++k) {
    const double x = k / 100.0;
    std::vector<double> row{x, outage_cap(x, b)};
    for (double l : figure_lambdas()) row.push_back(smoothed_power(FadingModel::rayleigh(l), x, b));
    t.add(std::move(row));
  }
  return t;
}

/// Rayleigh Omega(z) for z log-spaced over [1e-4, 10].
inline Table figure2() {
  Table t;
  t.header = {"z"};
  for (double l : figure_lambdas()) t.header.push_back(lambda_label("omega", l));
  const int n = 1000;
  for (int k = 0; k <= n; ++k) {
    const double z = std::pow(10.0, -4.0 + 5.0 * k / n);
    std::vector<double> row{z};
    for (double l : figure_lambdas()) row.push_back(FadingModel::rayleigh(l).omega(z));
    t.add(std::move(row));
  }
  return t;
}

/// psi(xi) at xi = k / 100, k = 5 .. 500.
inline Table psi_curve() {
  Table t;
  t.header = {"xi", "psi"};
  for (int k = 5; k <= 500; ++k) {
    const double xi = k / 100.0;
    t.add({xi, psi(xi)});
  }
  return t;
}

inline Table figure3() { return psi_curve(); }

/// sigma_zmin(lambda) for exponential fading on lambda = k * 5e-4 / zmin, k = 1 .. 10000.
inline Table sigma_curve(double zmin) {
  detail::require(zmin > 0.0, "sigma_curve: zmin must be > 0");
  Table t;
  t.header = {"lambda", "sigma"};
  for (int k = 1; k <= 10000; ++k) {
    const double lambda = k * 5e-4 / zmin;
    t.add({lambda, sigma_zmin(zmin, lambda)});
  }
  return t;
}

/// sigma * zmin against lambda * zmin; independent of zmin.
inline Table figure4() {
  Table t;
  t.header = {"lambda_zmin", "sigma_zmin"};
  for (int k = 1; k <= 10000; ++k) {
    const double u = k * 5e-4;
    t.add({u, sigma_zmin(1.0, u)});
  }
  return t;
}

/// Omega(z) for one fading model, z log-spaced over [zmin, max(100 zmin, 20 / lambda)].
inline Table omega_curve(const FadingModel& fading, double zmin) {
  detail::require(zmin > 0.0, "omega_curve: zmin must be > 0");
  const double scale = fading.kind() == FadingModel::Kind::custom ? fading.cutoff() : 20.0 / fading.lambda();
  const double zmax = std::max(100.0 * zmin, scale);
  Table t;
  t.header = {"z", "omega"};
  const int n = 1000;
  for (int k = 0; k <= n; ++k) {
    const double z = std::exp(std::log(zmin) + (std::log(zmax) - std::log(zmin)) * k / n);
    t.add({z, fading.omega(z)});
  }
  return t;
}

/// fig1 .. fig4; throws on an unknown id.
inline Table emit_figure_data(const std::string& which) {
  if (which == "fig1") return figure1();
  if (which == "fig2") return figure2();
  if (which == "fig3") return figure3();
  if (which == "fig4") return figure4();
  throw DomainError("unknown figure '" + which + "' (expected fig1, fig2, fig3 or fig4)");
}

/// Indices of interior local maxima of a column.
inline std::vector<std::size_t> local_maxima(const Table& t, std::size_t col) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < t.rows.size(); ++i) {
    const double v = t.rows[i][col];
    if (v > t.rows[i - 1][col] && v >= t.rows[i + 1][col]) out.push_back(i);
  }
  return out;
}

}  // namespace fastlip
