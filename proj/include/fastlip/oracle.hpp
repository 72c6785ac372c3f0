#pragma once

// Ground truth for tests and the verify command: the closed-form affine fixed
// point and brute-force grid search over the power box.

#include "fastlip/cost.hpp"
#include "fastlip/finite_difference.hpp"
#include "fastlip/interference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace fastlip {

/// p* = (I - F)^-1 u; requires rho(F) < 1.
inline Vector affine_fixed_point(const NetworkScenario& scn) {
  scn.validate();
  const Matrix f = scn.normalized_gain();
  const double rho = spectral_radius(f);
  if (!(rho < 1.0)) throw InfeasibleError("affine_fixed_point: rho(F) = " + std::to_string(rho) + " >= 1");
  const auto n = f.rows();
  return (Matrix::Identity(n, n) - f).partialPivLu().solve(scn.noise_term());
}

inline constexpr std::size_t kGridPointLimit = 10'000'000;
inline constexpr std::size_t kDefaultGridPoints = 60;

/// Tensor grid over a power box; log-spaced by default.
struct GridSpec {
  PowerBox box;
  std::size_t points_per_dim = kDefaultGridPoints;
  bool log_spaced = true;

  GridSpec(PowerBox b, std::size_t points = kDefaultGridPoints, bool log = true)
      : box(std::move(b)), points_per_dim(points), log_spaced(log) {
    validate();
  }

  /// Largest points-per-dimension (capped at `cap`) keeping the total within `budget`.
  static GridSpec with_budget(PowerBox b, std::size_t budget, std::size_t cap = kDefaultGridPoints) {
    const double n = static_cast<double>(b.size());
    auto per = static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(budget), 1.0 / n) + 1e-9));
    return GridSpec(std::move(b), std::clamp<std::size_t>(per, 2, cap));
  }

  std::size_t dims() const { return box.size(); }

  std::size_t total() const {
    double t = std::pow(static_cast<double>(points_per_dim), static_cast<double>(dims()));
    return t > static_cast<double>(kGridPointLimit) ? kGridPointLimit + 1 : static_cast<std::size_t>(t);
  }

  void validate() const {
    box.validate();
    detail::require(points_per_dim >= 2, "GridSpec: need at least 2 points per dimension");
    detail::require(!log_spaced || box.strictly_positive(), "GridSpec: log grid needs a positive box");
    if (total() > kGridPointLimit) throw DomainError("GridSpec: more than 1e7 grid points");
  }

  double coordinate(std::size_t dim, std::size_t k) const {
    const auto i = static_cast<Eigen::Index>(dim);
    if (k == 0) return box.lower(i);
    if (k + 1 == points_per_dim) return box.upper(i);
    const double t = static_cast<double>(k) / static_cast<double>(points_per_dim - 1);
    if (!log_spaced) return box.lower(i) + t * (box.upper(i) - box.lower(i));
    return std::exp(std::log(box.lower(i)) + t * (std::log(box.upper(i)) - std::log(box.lower(i))));
  }

  /// Width of one cell along `dim`: in ln p for log grids, in p otherwise.
  double cell_width(std::size_t dim) const {
    const auto i = static_cast<Eigen::Index>(dim);
    const double span = log_spaced ? std::log(box.upper(i)) - std::log(box.lower(i)) : box.upper(i) - box.lower(i);
    return span / static_cast<double>(points_per_dim - 1);
  }

  /// Largest per-coordinate distance between a and b, in cells.
  double cell_distance(const Vector& a, const Vector& b) const {
    double d = 0.0;
    for (std::size_t k = 0; k < dims(); ++k) {
      const auto i = static_cast<Eigen::Index>(k);
      const double gap = log_spaced ? std::abs(std::log(a(i)) - std::log(b(i))) : std::abs(a(i) - b(i));
      d = std::max(d, gap / cell_width(k));
    }
    return d;
  }

  bool within_cells(const Vector& a, const Vector& b, double cells = 1.0) const {
    return cell_distance(a, b) <= cells * (1.0 + 1e-9);
  }

  Vector point(std::uint64_t index) const {
    Vector p(static_cast<Eigen::Index>(dims()));
    for (std::size_t d = 0; d < dims(); ++d) {
      p(static_cast<Eigen::Index>(d)) = coordinate(d, index % points_per_dim);
      index /= points_per_dim;
    }
    return p;
  }
};

inline constexpr double kGridFeasibilitySlack = 1e-9;

struct GridResult {
  Vector p_best;
  Vector cost_best;
  std::vector<Vector> pareto_set;  // vector costs: every Pareto-minimal grid point, in index order
  std::size_t feasible = 0;
  std::size_t evaluated = 0;
};

/// true when a is no worse than b in every component and better in one.
inline bool dominates(const Vector& a, const Vector& b) {
  return (a.array() <= b.array()).all() && (a.array() < b.array()).any();
}

/// Brute-force minimum of kappa over grid points with p >= I(p) - 1e-9.
/// Scalar costs return the first minimizer in index order; vector costs
/// return the Pareto-minimal set and its first member as p_best.
inline GridResult grid_pareto_optimum(const InterferenceFunction& m, const CostModel& cost, const GridSpec& grid) {
  grid.validate();
  detail::require_size(static_cast<Eigen::Index>(grid.dims()), static_cast<Eigen::Index>(m.size()), "grid");
  const std::size_t total = grid.total();
  GridResult r;
  r.evaluated = total;
  const bool scalar = cost.output_size(m.size()) == 1;
  std::vector<std::pair<Vector, Vector>> archive;  // (p, cost), Pareto-minimal so far
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const Vector p = grid.point(idx);
    const Vector ip = m.eval(p);
    if (!((p - ip).array() >= -kGridFeasibilitySlack).all()) continue;
    ++r.feasible;
    Vector c = cost.eval(p);
    if (scalar) {
      if (r.feasible == 1 || c(0) < r.cost_best(0)) {
        r.p_best = p;
        r.cost_best = std::move(c);
      }
      continue;
    }
    bool dominated = false;
    for (const auto& [q, cq] : archive) {
      if (dominates(cq, c) || cq == c) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::erase_if(archive, [&](const auto& e) { return dominates(c, e.second); });
    archive.emplace_back(p, std::move(c));
  }
  if (r.feasible == 0) throw InfeasibleError("grid_pareto_optimum: no feasible grid point");
  if (!scalar) {
    for (auto& [q, cq] : archive) r.pareto_set.push_back(q);
    r.p_best = archive.front().first;
    r.cost_best = archive.front().second;
  } else {
    r.pareto_set.push_back(r.p_best);
  }
  return r;
}

/// Largest cost change across one grid cell at p: every coordinate moved one
/// cell up, or one cell down (clamped to the box). Component-wise for vector costs.
inline Vector one_cell_cost_variation_vector(const CostModel& cost, const GridSpec& grid, const Vector& p) {
  const Vector base = cost.eval(p);
  Vector worst = Vector::Zero(base.size());
  for (double dir : {-1.0, 1.0}) {
    Vector q = p;
    for (std::size_t d = 0; d < grid.dims(); ++d) {
      const auto i = static_cast<Eigen::Index>(d);
      q(i) = grid.log_spaced ? p(i) * std::exp(dir * grid.cell_width(d)) : p(i) + dir * grid.cell_width(d);
    }
    worst = worst.cwiseMax((cost.eval(grid.box.clamp(q)) - base).cwiseAbs());
  }
  return worst;
}

inline double one_cell_cost_variation(const CostModel& cost, const GridSpec& grid, const Vector& p) {
  return one_cell_cost_variation_vector(cost, grid, p).maxCoeff();
}

struct GridComparison {
  double cost_gap = 0.0;   // max over cost components of |kappa(p_ref) - kappa(grid point)|
  double tolerance = 0.0;  // one-cell cost variation at the worse of the two points
  double cells = 0.0;      // coordinate distance in cells, for reporting
  bool agrees = false;
};

/// Reference point against a grid result, with the one-cell cost variation as
/// tolerance. Vector costs compare against the closest member of the Pareto set.
inline GridComparison compare_to_grid(const CostModel& cost, const GridSpec& grid, const Vector& p_ref,
                                      const GridResult& r) {
  GridComparison best;
  bool seen = false;
  const Vector ref_cost = cost.eval(p_ref);
  for (const Vector& q : r.pareto_set) {
    const Vector gap = (ref_cost - cost.eval(q)).cwiseAbs();
    const Vector tol = one_cell_cost_variation_vector(cost, grid, p_ref)
                           .cwiseMax(one_cell_cost_variation_vector(cost, grid, q));
    GridComparison c;
    c.cost_gap = gap.maxCoeff();
    c.tolerance = tol.maxCoeff();
    c.cells = grid.cell_distance(p_ref, q);
    c.agrees = (gap.array() <= tol.array() * (1.0 + 1e-12)).all();
    if (!seen || (c.agrees && !best.agrees) || (c.agrees == best.agrees && c.cells < best.cells)) best = c;
    seen = true;
  }
  return best;
}

}  // namespace fastlip
