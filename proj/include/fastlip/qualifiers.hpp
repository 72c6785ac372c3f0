#pragma once

// Sampled verifiers for the Fast-Lipschitz qualifying conditions Q1, Q2, Qinf,
// the general Qk, and the type-II condition Qt2 together with its cost
// construction s = (I - B)^-1 c.
//
// Every check walks the same deterministic cloud (box corners, then seeded
// draws) and stops at the first violating sample. Margins are the worst slack
// of the binding inequality over the points visited, so they are reproducible
// from (samples, seed).

#include "fastlip/logdomain.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fastlip {

enum class Verdict { holds, fails, inapplicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::fails:
      return "fails";
    case Verdict::inapplicable:
      return "inapplicable";
  }
  return "fails";
}

/// Norm used for the contraction requirement ||grad f|| < 1 in Q1 / Qk.
enum class ContractionNorm { one, inf };

inline double contraction_norm(const Matrix& g, ContractionNorm which) {
  return which == ContractionNorm::one ? norm_one(g) : norm_inf(g);
}

struct ConditionEntry {
  std::string id;
  Verdict verdict = Verdict::holds;
  double margin = 0.0;
  std::optional<Vector> worst_point;     // where the margin is attained
  std::optional<Vector> counterexample;  // only set when verdict == fails
  std::string detail;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct QRatio {
  bool applicable = false;  // false when some cost component is not increasing anywhere
  double value = 0.0;
};

/// q = min_j (min_i [g0]_ij / max_i [g0]_ij), clamped at 0.
inline QRatio q_ratio(const Gradient& grad_f0) {
  QRatio q{true, 1.0};
  if (grad_f0.size() == 0) return QRatio{false, 0.0};
  for (Eigen::Index j = 0; j < grad_f0.cols(); ++j) {
    const double mx = grad_f0.col(j).maxCoeff();
    const double mn = grad_f0.col(j).minCoeff();
    if (!(mx > 0.0)) return QRatio{false, 0.0};
    q.value = std::min(q.value, std::max(0.0, mn / mx));
  }
  return q;
}

inline QRatio q_ratio(const FlProblem& lp, const Vector& x) { return q_ratio(lp.objective_gradient(x)); }

namespace detail {

inline bool all_at_least(const Matrix& m, double bound) { return (m.array() >= bound).all(); }

/// grad f0 >= 0 and every row (input) has a positive entry.
inline bool nonneg_nonzero_rows(const Gradient& g0) {
  if (!all_at_least(g0, -kSignSlack)) return false;
  for (Eigen::Index i = 0; i < g0.rows(); ++i) {
    if (!(g0.row(i).maxCoeff() > 0.0)) return false;
  }
  return true;
}

class EntryBuilder {
 public:
  EntryBuilder(std::string id, std::size_t samples, std::uint64_t seed) {
    e_.id = std::move(id);
    e_.seed = seed;
    e_.samples = samples;
  }

  void observe(const Vector& x, double margin) {
    if (!seen_ || margin < e_.margin) {
      e_.margin = margin;
      e_.worst_point = x;
    }
    seen_ = true;
  }

  ConditionEntry fail(const Vector& x, std::string why) {
    e_.verdict = Verdict::fails;
    e_.counterexample = x;
    e_.detail = std::move(why);
    return e_;
  }

  ConditionEntry inapplicable(const Vector& x, std::string why) {
    e_.verdict = Verdict::inapplicable;
    e_.worst_point = x;
    e_.detail = std::move(why);
    return e_;
  }

  ConditionEntry hold(std::string note = {}) {
    e_.verdict = Verdict::holds;
    e_.detail = std::move(note);
    return e_;
  }

 private:
  ConditionEntry e_;
  bool seen_ = false;
};

/// For Q2 / Qinf / Qk: classify a cost gradient that does not give q > 0.
inline std::optional<std::string> strict_cost_problem(const Gradient& g0, const QRatio& q, bool* is_failure) {
  if ((g0.array() < -kSignSlack).any()) {
    *is_failure = true;
    return std::string("grad f0 has negative entries");
  }
  if (!q.applicable || q.value <= 0.0) {
    *is_failure = false;
    return std::string("q(x) = 0: grad f0 is not strictly positive");
  }
  return std::nullopt;
}

}  // namespace detail

/// Q1: grad f0 >= 0 with non-zero rows, ||grad f|| < 1, grad f >= 0.
inline ConditionEntry check_Q1(const FlProblem& lp, std::size_t samples, std::uint64_t seed,
                               ContractionNorm norm = ContractionNorm::one) {
  const auto pts = lp.sample_points(samples, seed);
  detail::EntryBuilder b("Q1", pts.size(), seed);
  for (const Vector& x : pts) {
    const Gradient g0 = lp.objective_gradient(x);
    const Gradient g = lp.constraint_gradient(x);
    const double margin = 1.0 - contraction_norm(g, norm);
    b.observe(x, margin);
    if (!detail::nonneg_nonzero_rows(g0)) return b.fail(x, "(a) grad f0 >= 0 with non-zero rows violated");
    if (!(margin > 0.0)) return b.fail(x, "(b) ||grad f|| < 1 violated");
    if (!detail::all_at_least(g, -kSignSlack)) return b.fail(x, "(c) grad f >= 0 violated");
  }
  return b.hold();
}

/// Q2: grad f0 > 0, (grad f)^2 >= 0, ||grad f||_inf < q(x).
inline ConditionEntry check_Q2(const FlProblem& lp, std::size_t samples, std::uint64_t seed) {
  const auto pts = lp.sample_points(samples, seed);
  detail::EntryBuilder b("Q2", pts.size(), seed);
  for (const Vector& x : pts) {
    const Gradient g0 = lp.objective_gradient(x);
    const QRatio q = q_ratio(g0);
    bool failure = false;
    if (auto why = detail::strict_cost_problem(g0, q, &failure)) {
      return failure ? b.fail(x, *why) : b.inapplicable(x, *why);
    }
    const Gradient g = lp.constraint_gradient(x);
    const double margin = q.value - norm_inf(g);
    b.observe(x, margin);
    if (!detail::all_at_least(g * g, -kSignSlack)) return b.fail(x, "(grad f)^2 >= 0 violated");
    if (!(margin > 0.0)) return b.fail(x, "||grad f||_inf < q(x) violated");
  }
  return b.hold();
}

/// Qinf: grad f0 > 0, ||grad f||_inf < q / (1 + q).
inline ConditionEntry check_Qinf(const FlProblem& lp, std::size_t samples, std::uint64_t seed) {
  const auto pts = lp.sample_points(samples, seed);
  detail::EntryBuilder b("Qinf", pts.size(), seed);
  for (const Vector& x : pts) {
    const Gradient g0 = lp.objective_gradient(x);
    const QRatio q = q_ratio(g0);
    bool failure = false;
    if (auto why = detail::strict_cost_problem(g0, q, &failure)) {
      return failure ? b.fail(x, *why) : b.inapplicable(x, *why);
    }
    const double margin = q.value / (1.0 + q.value) - norm_inf(lp.constraint_gradient(x));
    b.observe(x, margin);
    if (!(margin > 0.0)) return b.fail(x, "||grad f||_inf < q/(1+q) violated");
  }
  return b.hold();
}

inline std::string qk_id(std::optional<int> k) {
  return k ? "Qk(k=" + std::to_string(*k) + ")" : std::string("Qk(k=inf)");
}

/// General condition for a fixed order k (nullopt = infinity):
///   grad f0 >= 0 with non-zero rows; ||grad f|| < 1;
///   k finite: (grad f)^k >= 0;  k > 1: ||sum_{l=1}^{k-1} (grad f)^l||_inf < q(x).
inline ConditionEntry check_Qk(const FlProblem& lp, std::optional<int> k, std::size_t samples,
                               std::uint64_t seed, ContractionNorm norm = ContractionNorm::one) {
  if (k && *k < 1) throw DomainError("check_Qk: k must be >= 1");
  const auto pts = lp.sample_points(samples, seed);
  detail::EntryBuilder b(qk_id(k), pts.size(), seed);
  const bool needs_q = !k || *k > 1;
  for (const Vector& x : pts) {
    const Gradient g0 = lp.objective_gradient(x);
    const Gradient g = lp.constraint_gradient(x);
    double margin = 1.0 - contraction_norm(g, norm);
    QRatio q;
    Matrix partial;
    if (needs_q) {
      q = q_ratio(g0);
      bool failure = false;
      if (auto why = detail::strict_cost_problem(g0, q, &failure)) {
        if (failure) return b.fail(x, *why);
        return b.inapplicable(x, *why);
      }
      const auto n = g.rows();
      if (k) {
        partial = Matrix::Zero(n, n);
        Matrix power = Matrix::Identity(n, n);
        for (int l = 1; l < *k; ++l) {
          power = power * g;
          partial += power;
        }
      } else if (margin > 0.0) {
        partial = g * (Matrix::Identity(n, n) - g).inverse();
      }
      // k = inf with ||grad f|| >= 1: the series diverges, the norm check below fails.
      if (partial.size() > 0) margin = std::min(margin, q.value - norm_inf(partial));
    }
    b.observe(x, margin);
    if (!detail::nonneg_nonzero_rows(g0)) return b.fail(x, "grad f0 >= 0 with non-zero rows violated");
    if (!(1.0 - contraction_norm(g, norm) > 0.0)) return b.fail(x, "||grad f|| < 1 violated");
    if (k) {
      Matrix power = g;
      for (int l = 1; l < *k; ++l) power = power * g;
      if (!detail::all_at_least(power, -kSignSlack)) return b.fail(x, "(grad f)^k >= 0 violated");
    }
    if (needs_q && !(q.value - norm_inf(partial) > 0.0)) {
      return b.fail(x, "||sum_{l<k} (grad f)^l||_inf < q(x) violated");
    }
  }
  return b.hold();
}

inline constexpr int kDefaultQkMax = 8;

/// Tries k = 1..k_max then k = infinity; returns the first entry that holds,
/// otherwise the one with the largest margin.
inline ConditionEntry search_Qk(const FlProblem& lp, std::size_t samples, std::uint64_t seed,
                                int k_max = kDefaultQkMax, ContractionNorm norm = ContractionNorm::one) {
  std::optional<ConditionEntry> best;
  auto consider = [&](ConditionEntry e) -> bool {
    if (e.verdict == Verdict::holds) {
      best = std::move(e);
      return true;
    }
    if (!best || (e.verdict == Verdict::fails && best->verdict != Verdict::fails) ||
        (e.verdict == best->verdict && e.margin > best->margin)) {
      best = std::move(e);
    }
    return false;
  };
  for (int k = 1; k <= k_max; ++k) {
    if (consider(check_Qk(lp, k, samples, seed, norm))) return *best;
  }
  consider(check_Qk(lp, std::nullopt, samples, seed, norm));
  return *best;
}

/// Entrywise bound B >= |grad f(x)| for the type-II condition.
struct BBound {
  Matrix b;
  double rho = 0.0;
  bool exact = false;        // constant gradient: no inflation applied
  double inflation = 1.0;    // factor applied to the sampled maximum
  std::size_t samples = 0;
};

inline constexpr double kBInflation = 1.05;

/// Exact |grad f| for constant gradients, else 1.05 * entrywise max over the cloud.
inline BBound estimate_b_bound(const FlProblem& lp, std::size_t samples, std::uint64_t seed) {
  BBound out;
  if (auto g = lp.constant_constraint_gradient()) {
    out.b = g->cwiseAbs();
    out.exact = true;
    out.samples = 0;
  } else {
    const auto pts = lp.sample_points(samples, seed);
    const auto n = static_cast<Eigen::Index>(lp.size());
    out.b = Matrix::Zero(n, n);
    for (const Vector& x : pts) out.b = out.b.cwiseMax(lp.constraint_gradient(x).cwiseAbs());
    out.b *= kBInflation;
    out.inflation = kBInflation;
    out.samples = pts.size();
  }
  out.rho = spectral_radius(out.b);
  return out;
}

/// s = (I - B)^-1 c, requiring rho(B) < 1 and c > 0. The result is positive.
inline Vector t2_weights(const Matrix& b, const Vector& c) {
  detail::require_size(c.size(), b.rows(), "t2_weights c");
  detail::require((c.array() > 0.0).all(), "t2_weights: c must be > 0");
  const double rho = spectral_radius(b);
  if (!(rho < 1.0)) throw DomainError("t2_weights: rho(B) = " + std::to_string(rho) + " >= 1");
  const auto n = b.rows();
  Vector s = (Matrix::Identity(n, n) - b).partialPivLu().solve(c);
  if (!(s.array() > 0.0).all()) throw DomainError("t2_weights: (I - B)^-1 c not positive");
  return s;
}

/// kappa(p) = h(prod_i p_i^{s_i}) with s = (I - B)^-1 c.
inline CostModel construct_t2_cost(const BBound& bound, const Vector& c,
                                   ScalarTransform h = ScalarTransform::log()) {
  return CostModel::weighted_power_product(t2_weights(bound.b, c), std::move(h));
}

struct Qt2Result {
  ConditionEntry entry;
  BBound bound;
  std::optional<Vector> s;  // (I - B)^-1 c when rho(B) < 1
};

/// Qt2: (grad f)^2 >= 0, |grad f| <= B with rho(B) < 1, and f0(x) = h(w^T x)
/// for weights w = (I - B)^-1 c' with some c' > 0. Also returns s for the given c.
inline Qt2Result check_Qt2(const FlProblem& lp, const Vector& c, std::size_t samples, std::uint64_t seed) {
  detail::require_size(c.size(), static_cast<Eigen::Index>(lp.size()), "check_Qt2 c");
  detail::require((c.array() > 0.0).all(), "check_Qt2: c must be > 0");
  Qt2Result out;
  out.bound = estimate_b_bound(lp, samples, seed);
  const auto pts = lp.sample_points(samples, seed);
  detail::EntryBuilder b("Qt2", pts.size(), seed);
  const Vector origin = lp.point_from_unit(Vector::Zero(static_cast<Eigen::Index>(lp.size())));
  b.observe(origin, 1.0 - out.bound.rho);
  if (!(out.bound.rho < 1.0)) {
    out.entry = b.fail(origin, "rho(B) = " + std::to_string(out.bound.rho) + " >= 1");
    return out;
  }
  out.s = t2_weights(out.bound.b, c);
  const auto n = out.bound.b.rows();
  for (const Vector& x : pts) {
    const Gradient g = lp.constraint_gradient(x);
    if (!detail::all_at_least(g * g, -kSignSlack)) {
      out.entry = b.fail(x, "(grad f)^2 >= 0 violated");
      return out;
    }
    if (!(g.cwiseAbs().array() <= out.bound.b.array() * (1.0 + 1e-12) + 1e-15).all()) {
      out.entry = b.fail(x, "|grad f| <= B violated");
      return out;
    }
  }
  const auto w = lp.objective_linear_weights();
  if (!w) {
    out.entry = b.inapplicable(origin, "cost is not of the form h(s^T x)");
    return out;
  }
  const Vector implied_c = (Matrix::Identity(n, n) - out.bound.b) * *w;
  if (!(implied_c.array() > 0.0).all()) {
    out.entry = b.fail(origin, "cost weights are not (I - B)^-1 c for any c > 0");
    return out;
  }
  out.entry = b.hold(out.bound.exact ? "B exact (constant gradient)" : "B certified on the sample cloud only");
  return out;
}

struct QualifyOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  ContractionNorm norm = ContractionNorm::one;
  int k_max = kDefaultQkMax;
  std::optional<Vector> t2_c;  // defaults to the all-ones vector
};

struct QualificationReport {
  std::vector<ConditionEntry> entries;
  std::optional<Vector> t2_weights;
  bool certified = false;

  std::string statement() const {
    return certified ? "Fast-Lipschitz certified (sampled)" : "not certified";
  }

  const ConditionEntry* find(const std::string& id) const {
    for (const auto& e : entries) {
      if (e.id == id || (id == "Qk" && e.id.rfind("Qk", 0) == 0)) return &e;
    }
    return nullptr;
  }
};

inline QualificationReport qualify(const FlProblem& lp, const QualifyOptions& opt = {}) {
  QualificationReport r;
  r.entries.push_back(check_Q1(lp, opt.samples, opt.seed, opt.norm));
  r.entries.push_back(check_Q2(lp, opt.samples, opt.seed));
  r.entries.push_back(check_Qinf(lp, opt.samples, opt.seed));
  r.entries.push_back(search_Qk(lp, opt.samples, opt.seed, opt.k_max, opt.norm));
  if (lp.coordinates() == Coordinates::log_power) {
    const Vector c = opt.t2_c.value_or(Vector::Ones(static_cast<Eigen::Index>(lp.size())));
    Qt2Result t2 = check_Qt2(lp, c, opt.samples, opt.seed);
    r.t2_weights = t2.s;
    r.entries.push_back(std::move(t2.entry));
  } else {
    ConditionEntry e;
    e.id = "Qt2";
    e.verdict = Verdict::inapplicable;
    e.detail = "needs log-power coordinates";
    e.seed = opt.seed;
    r.entries.push_back(std::move(e));
  }
  for (const auto& e : r.entries) r.certified = r.certified || e.verdict == Verdict::holds;
  return r;
}

}  // namespace fastlip
