#pragma once

// Fixed-point iteration p^{k+1} = I(p^k), synchronous and with simulated
// bounded-delay asynchrony.

#include "fastlip/interference.hpp"
#include "fastlip/sampling.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace fastlip {

struct SolverSettings {
  double tol = 1e-10;                 // on ||p - I(p)||_inf
  std::size_t max_iters = 100000;
  bool project = false;               // clamp every update onto the box
  std::optional<PowerBox> box;        // required when project is set
  double divergence_factor = 1e12;    // times max(||p_max||_inf, 1)
};

enum class SolveVerdict { converged, max_iters, diverged };

inline const char* to_string(SolveVerdict v) {
  switch (v) {
    case SolveVerdict::converged:
      return "converged";
    case SolveVerdict::max_iters:
      return "max-iters";
    case SolveVerdict::diverged:
      return "diverged";
  }
  return "diverged";
}

struct IterationStep {
  std::size_t k = 0;
  Vector p;
  double residual = 0.0;  // ||p^k - T(p^k)||_inf, T the (projected) update
};

/// Per-link delays d_ij(k) drawn uniformly from {0, ..., max_delay}; d_ii = 0.
struct DelaySchedule {
  std::size_t max_delay = 0;
  std::uint64_t seed = 0;
};

struct IterationTrace {
  std::vector<IterationStep> steps;
  SolveVerdict verdict = SolveVerdict::max_iters;
  std::size_t iterations = 0;  // updates applied
  Vector p_star;
  double residual = 0.0;
  bool clamped = false;  // some projection changed an iterate
  SolverSettings settings;
  std::optional<DelaySchedule> schedule;
};

/// ||p - I(p)||_inf.
inline double fixed_point_residual(const InterferenceFunction& m, const Vector& p) {
  return (p - m.eval(p)).lpNorm<Eigen::Infinity>();
}

namespace detail {

inline void check_solver_inputs(const InterferenceFunction& m, const Vector& p0, const SolverSettings& s) {
  require_size(p0.size(), static_cast<Eigen::Index>(m.size()), "initial point");
  require_finite(p0, "initial point");
  require(s.tol > 0.0, "solver: tol must be > 0");
  require(s.max_iters >= 1, "solver: max_iters must be >= 1");
  require(!s.project || s.box.has_value(), "solver: projection needs a box");
  if (s.box) {
    require_size(static_cast<Eigen::Index>(s.box->size()), p0.size(), "solver box");
    require(s.box->contains(p0), "solver: p0 outside the box");
  }
}

inline double divergence_limit(const Vector& p0, const SolverSettings& s) {
  const double scale = s.box ? s.box->upper.lpNorm<Eigen::Infinity>() : p0.lpNorm<Eigen::Infinity>();
  return s.divergence_factor * std::max(scale, 1.0);
}

/// Applies the optional clamp; reports whether it moved anything.
inline Vector project_update(Vector v, const SolverSettings& s, bool* fired) {
  if (!s.project) return v;
  Vector c = s.box->clamp(v);
  if (c != v) *fired = true;
  return c;
}

inline bool blown_up(const Vector& v, double limit) {
  return !v.allFinite() || v.lpNorm<Eigen::Infinity>() > limit;
}

/// Shared driver: `next(k, p)` returns p^{k+1}; the residual always uses the
/// undelayed update T(p^k).
template <typename Next>
IterationTrace run_iteration(const InterferenceFunction& m, const Vector& p0, const SolverSettings& s, Next next) {
  check_solver_inputs(m, p0, s);
  const double limit = divergence_limit(p0, s);
  IterationTrace t;
  t.settings = s;
  Vector p = p0;
  for (std::size_t k = 0;; ++k) {
    const Vector tp = project_update(m.eval(p), s, &t.clamped);
    const double r = tp.allFinite() ? (p - tp).lpNorm<Eigen::Infinity>() : std::numeric_limits<double>::infinity();
    t.steps.push_back({k, p, r});
    t.iterations = k;
    t.p_star = p;
    t.residual = r;
    if (r < s.tol) {
      t.verdict = SolveVerdict::converged;
      return t;
    }
    if (k == s.max_iters) {
      t.verdict = SolveVerdict::max_iters;
      return t;
    }
    Vector pn = next(k, p, tp);
    if (blown_up(pn, limit)) {
      t.steps.push_back({k + 1, pn, std::numeric_limits<double>::infinity()});
      t.iterations = k + 1;
      t.p_star = pn;
      t.residual = std::numeric_limits<double>::infinity();
      t.verdict = SolveVerdict::diverged;
      return t;
    }
    p = std::move(pn);
  }
}

}  // namespace detail

/// p^{k+1} = I(p^k), optionally clamped onto the box. Converged once
/// ||p^k - I(p^k)||_inf < tol; p^k is then reported as the fixed point.
inline IterationTrace solve_sync(const InterferenceFunction& m, const Vector& p0, const SolverSettings& s = {}) {
  return detail::run_iteration(m, p0, s, [](std::size_t, const Vector&, const Vector& tp) { return tp; });
}

/// Every component updates at every step, reading p_j from d_ij(k) steps back.
/// Delays reaching before the start read p0. With max_delay = 0 the trace equals
/// solve_sync.
inline IterationTrace solve_async(const InterferenceFunction& m, const Vector& p0, const DelaySchedule& sched,
                                  const SolverSettings& s = {}) {
  const auto n = p0.size();
  std::deque<Vector> history;  // history[d] = p^{k-d}
  UnitSampler rng(sched.seed);
  bool clamped = false;
  auto next = [&](std::size_t, const Vector& p, const Vector& tp) -> Vector {
    history.push_front(p);
    while (history.size() > sched.max_delay + 1) history.pop_back();
    if (sched.max_delay == 0) return tp;
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      Vector q(n);
      bool stale = false;
      for (Eigen::Index j = 0; j < n; ++j) {
        std::size_t d = 0;
        if (i != j) {
          d = static_cast<std::size_t>(rng.uniform() * static_cast<double>(sched.max_delay + 1));
          d = std::min(d, sched.max_delay);
        }
        const Vector& src = d < history.size() ? history[d] : history.back();
        q(j) = src(j);
        stale = stale || d > 0;
      }
      out(i) = stale ? m.eval(q)(i) : tp(i);
    }
    return detail::project_update(std::move(out), s, &clamped);
  };
  IterationTrace t = detail::run_iteration(m, p0, s, next);
  t.clamped = t.clamped || clamped;
  t.schedule = sched;
  return t;
}

}  // namespace fastlip
