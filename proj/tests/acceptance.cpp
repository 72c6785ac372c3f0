// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "fastlip/fastlip.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace fastlip;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
};

class Gate {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && first_.empty()) first_ = what;
    pass_ = pass_ && ok;
  }
  void note(std::string n) { note_ = std::move(n); }
  Outcome done() const { return {pass_, pass_ ? note_ : first_ + (note_.empty() ? "" : "; " + note_)}; }

 private:
  bool pass_ = true;
  std::string first_;
  std::string note_;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

NetworkScenario random_affine(UnitSampler& rng, Eigen::Index n) {
  for (;;) {
    NetworkScenario s;
    s.gains.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      // cross gains shrink with n so total coupling stays comparable across sizes
      for (Eigen::Index j = 0; j < n; ++j) {
        s.gains(i, j) = i == j ? rng.uniform(1.0, 2.0) : rng.uniform(0.0, 0.8 / static_cast<double>(n - 1));
      }
    }
    s.tau = Vector::NullaryExpr(n, [&](Eigen::Index) { return rng.uniform(0.5, 1.5); });
    s.eta = Vector::NullaryExpr(n, [&](Eigen::Index) { return rng.uniform(0.05, 0.3); });
    s.box = PowerBox::uniform(static_cast<std::size_t>(n), 1e-3, 10.0);
    if (spectral_radius(s.normalized_gain()) >= 0.9) continue;
    // keep p* well inside the box so the grid brackets it
    const Vector p = affine_fixed_point(s);
    if ((p.array() < 1.0).all()) return s;
  }
}

// Affine optimality: solver vs closed form, grid optimum within one cell.
Outcome ac1() {
  Gate g;
  const auto t0 = std::chrono::steady_clock::now();
  UnitSampler rng(101);
  double worst_rel = 0.0;
  double worst_cells = 0.0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const NetworkScenario s = random_affine(rng, n);
    const AffineInterference m(s);
    const Vector exact = affine_fixed_point(s);
    const auto t = solve_sync(m, s.box.clamp(Vector::Ones(n)));
    g.expect(t.verdict == SolveVerdict::converged, "solver did not converge (trial " + std::to_string(trial) + ")");
    const double rel = (t.p_star - exact).lpNorm<Eigen::Infinity>() / exact.lpNorm<Eigen::Infinity>();
    worst_rel = std::max(worst_rel, rel);
    const GridSpec grid = GridSpec::with_budget(s.box, 1'000'000);
    const auto r = grid_pareto_optimum(m, CostModel::sum(), grid);
    const auto cmp = compare_to_grid(CostModel::sum(), grid, exact, r);
    worst_cells = std::max(worst_cells, cmp.cells);
    worst_gap = std::max(worst_gap, cmp.cost_gap / cmp.tolerance);
    g.expect(cmp.agrees, "cost gap " + fmt(cmp.cost_gap) + " exceeds one-cell variation " + fmt(cmp.tolerance) +
                             " (n = " + std::to_string(n) + ")");
  }
  g.expect(worst_rel <= 1e-8, "relative error " + fmt(worst_rel));
  const double secs = seconds_since(t0);
  g.expect(secs < 10.0, "runtime " + fmt(secs) + " s");
  g.note("max rel err " + fmt(worst_rel) + ", max gap/one-cell variation " + fmt(worst_gap) + ", max grid distance " +
         fmt(worst_cells) + " cells, " + fmt(secs) + " s");
  return g.done();
}

// Lemma 2 on every bundled two-sided-scalable model.
Outcome ac2() {
  Gate g;
  std::size_t models = 0;
  double worst_ratio = 0.0;
  double worst_norm = 0.0;
  for (const auto& e : zoo::catalog()) {
    const bool two_sided = classify_two_sided(*e.model, e.box, 1000, 1).holds;
    g.expect(two_sided == e.two_sided, e.name + ": two-sided classification differs from catalog");
    if (!two_sided) continue;
    ++models;
    const FlProblem lp = to_log_problem(e.model, e.cost, e.box);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto s = check_shrinking(lp, 1000, seed);
      const auto n = check_grad_norm1(lp, 1000, seed);
      g.expect(s.holds, e.name + ": shrinking violated, seed " + std::to_string(seed));
      g.expect(n.holds, e.name + ": ||grad f||_1 >= 1, seed " + std::to_string(seed));
      worst_ratio = std::max(worst_ratio, s.max_ratio);
      worst_norm = std::max(worst_norm, n.max_norm1);
    }
  }
  g.expect(models > 0, "no two-sided models");
  g.note(std::to_string(models) + " models, max ratio " + fmt(worst_ratio) + ", max ||grad f||_1 " + fmt(worst_norm));
  return g.done();
}

Outcome ac3() {
  Gate g;
  const auto f = FadingModel::rayleigh(1.0);
  const double lim = f.omega(1e-9);
  const double mid = f.omega(std::numbers::sqrt2);
  const double bound = rayleigh_max_abs_omega(std::sqrt(std::numbers::pi / 2.0));
  g.expect(std::abs(lim - 1.2533) <= 1e-3, "Omega(0+) = " + fmt(lim));
  g.expect(std::abs(mid + 0.323) <= 1e-3, "Omega(sqrt 2) = " + fmt(mid));
  g.expect(std::abs(bound - 1.0) <= 1e-4, "max |Omega| = " + fmt(bound));
  g.note("Omega(0+) " + fmt(lim) + ", Omega(sqrt2) " + fmt(mid) + ", bound " + fmt(bound));
  return g.done();
}

Outcome ac4() {
  Gate g;
  const auto t0 = std::chrono::steady_clock::now();
  const auto v = sigma_stationary_points();
  g.expect(std::abs(v.v1 - 0.1184) <= 1e-3 && std::abs(v.v2 - 1.5656) <= 1e-3,
           "stationary points " + fmt(v.v1) + ", " + fmt(v.v2));
  double worst_global = -1.0;
  for (double zmin : {1e-3, 0.1, 1.0, 10.0}) {
    const double p1 = sigma_zmin(zmin, v.v1 / zmin) * zmin;
    const double p2 = sigma_zmin(zmin, v.v2 / zmin) * zmin;
    g.expect(std::abs(p1 - 0.093) <= 2e-3, "first peak " + fmt(p1) + " at zmin " + fmt(zmin));
    g.expect(std::abs(p2 - 0.185) <= 2e-3, "second peak " + fmt(p2) + " at zmin " + fmt(zmin));
    double best = 0.0;
    for (int k = 1; k <= 100000; ++k) best = std::max(best, sigma_zmin(zmin, k * 1e-4 / zmin));
    g.expect(best <= (0.185 + 1e-3) / zmin, "global max " + fmt(best * zmin) + "/zmin");
    worst_global = std::max(worst_global, best * zmin);
  }
  const double secs = seconds_since(t0);
  g.expect(secs < 2.0, "runtime " + fmt(secs) + " s");
  g.note("v = (" + fmt(v.v1) + ", " + fmt(v.v2) + "), max sigma*zmin " + fmt(worst_global) + ", " + fmt(secs) + " s");
  return g.done();
}

// Lemma 3 with finite-difference gradients.
Outcome ac5() {
  Gate g;
  UnitSampler rng(505);
  std::size_t violations = 0;
  double worst = -INFINITY;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    NetworkScenario s;
    s.gains.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) s.gains(i, j) = i == j ? rng.uniform(0.5, 2.0) : rng.uniform(0.0, 0.5);
    }
    s.tau = Vector::NullaryExpr(n, [&](Eigen::Index) { return rng.uniform(0.5, 2.0); });
    s.eta = Vector::NullaryExpr(n, [&](Eigen::Index) { return rng.uniform(0.05, 0.5); });
    s.box = PowerBox::uniform(static_cast<std::size_t>(n), 1e-3, 20.0);
    const double lambda = std::exp(rng.uniform(std::log(0.3), std::log(3.0)));
    const FadingModel fad = trial % 2 ? FadingModel::rayleigh(lambda) : FadingModel::exponential(lambda);
    const double b = rng.uniform(0.5, 5.0);
    auto base = std::make_shared<const AffineInterference>(s);
    const SmoothedInterference m(base, {fad}, b);
    for (int k = 0; k < 100; ++k) {
      const Vector p = map_log_uniform(s.box.lower, s.box.upper, rng.point(n));
      const Gradient fd = fd_gradient([&](const Vector& q) { return m.eval(q); }, p);
      const double bound = m.omegas(p).cwiseAbs().maxCoeff() * norm_inf(base->gradient(p));
      const double excess = norm_inf(fd) - bound;
      worst = std::max(worst, excess);
      violations += excess > 1e-6;
    }
  }
  g.expect(violations == 0, std::to_string(violations) + " violations");
  g.note("5000 points, max (lhs - bound) " + fmt(worst));
  return g.done();
}

Outcome ac6() {
  Gate g;
  UnitSampler rng(606);
  double worst_resid = 0.0;
  double worst_cells = 0.0;
  double worst_gap = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 2;
    Matrix a = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = i == j ? 0.0 : -rng.uniform(0.0, 0.6);
    }
    if (spectral_radius(a.cwiseAbs()) >= 0.9) a *= 0.8 / spectral_radius(a.cwiseAbs());
    const Vector bvec = Vector::NullaryExpr(n, [&](Eigen::Index) { return rng.uniform(-1.0, 1.0); });
    const Vector c = Vector::NullaryExpr(n, [&](Eigen::Index) { return rng.uniform(0.5, 2.0); });
    auto m = std::make_shared<const MonomialInterference>(a, bvec);
    const PowerBox box = PowerBox::uniform(static_cast<std::size_t>(n), std::exp(-6.0), std::exp(6.0));
    const BBound bound = estimate_b_bound(to_log_problem(m, CostModel::sum(), box), 100, 1);
    const CostModel cost = construct_t2_cost(bound, c);
    const FlProblem lp = to_log_problem(m, cost, box);
    const Qt2Result q = check_Qt2(lp, c, 1000, 1);
    const std::string tag = " (trial " + std::to_string(trial) + ")";
    g.expect(q.entry.verdict == Verdict::holds, "Qt2 " + std::string(to_string(q.entry.verdict)) + tag + ": " + q.entry.detail);
    if (!q.s) continue;
    const double resid = ((Matrix::Identity(n, n) - q.bound.b) * *q.s - c).lpNorm<Eigen::Infinity>();
    worst_resid = std::max(worst_resid, resid);
    g.expect(resid <= 1e-10, "(I - B)s - c = " + fmt(resid) + tag);
    g.expect((q.s->array() > 0.0).all(), "s not positive" + tag);
    const auto t = solve_sync(*m, Vector::Ones(n));
    g.expect(t.verdict == SolveVerdict::converged, "solver" + tag);
    const GridSpec grid(box, 60);
    const auto r = grid_pareto_optimum(*m, cost, grid);
    const auto cmp = compare_to_grid(cost, grid, t.p_star, r);
    worst_cells = std::max(worst_cells, cmp.cells);
    worst_gap = std::max(worst_gap, cmp.cost_gap / cmp.tolerance);
    g.expect(cmp.agrees, "cost gap " + fmt(cmp.cost_gap) + " exceeds one-cell variation " + fmt(cmp.tolerance) + tag);
  }
  g.note("max residual " + fmt(worst_resid) + ", max gap/one-cell variation " + fmt(worst_gap) +
         ", max grid distance " + fmt(worst_cells) + " cells");
  return g.done();
}

Outcome ac7() {
  Gate g;
  const SolverSettings settings;
  const double allowed = 10.0 * settings.tol;
  double worst = 0.0;
  std::size_t runs = 0;
  for (const auto& e : zoo::catalog()) {
    if (!e.contractive) continue;
    const auto n = static_cast<Eigen::Index>(e.model->size());
    const Vector p0 = e.box.clamp(Vector::Ones(n));
    const auto sync = solve_sync(*e.model, p0, settings);
    g.expect(sync.verdict == SolveVerdict::converged, e.name + ": sync did not converge");
    for (std::size_t d : {1u, 3u, 10u}) {
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto as = solve_async(*e.model, p0, {d, seed}, settings);
        ++runs;
        g.expect(as.verdict == SolveVerdict::converged, e.name + ": async did not converge, D = " + std::to_string(d));
        const double gap = (as.p_star - sync.p_star).lpNorm<Eigen::Infinity>();
        worst = std::max(worst, gap);
        g.expect(gap <= allowed, e.name + ": gap " + fmt(gap) + ", D = " + std::to_string(d));
      }
    }
  }
  g.note(std::to_string(runs) + " async runs, max gap " + fmt(worst));
  return g.done();
}

Outcome ac8() {
  Gate g;
  std::size_t q_points = 0;
  double worst_bound = 0.0;
  for (const auto& e : zoo::catalog()) {
    const FlProblem lp = to_log_problem(e.model, e.cost, e.box);
    for (auto norm : {ContractionNorm::one, ContractionNorm::inf}) {
      const auto q1 = check_Q1(lp, 1000, 1, norm);
      const auto qk = check_Qk(lp, 1, 1000, 1, norm);
      g.expect(q1.verdict == qk.verdict, e.name + ": Q1 " + to_string(q1.verdict) + " vs Qk(k=1) " + to_string(qk.verdict));
      if (q1.verdict != Verdict::inapplicable) {
        g.expect(q1.margin == qk.margin, e.name + ": margins " + fmt(q1.margin) + " vs " + fmt(qk.margin));
      }
    }
    for (const Vector& x : lp.sample_points(1000, 1)) {
      const QRatio q = q_ratio(lp, x);
      if (!q.applicable || q.value > 1.0) continue;
      ++q_points;
      const double r = q.value / (1.0 + q.value);
      worst_bound = std::max(worst_bound, r);
      g.expect(r <= 0.5, e.name + ": q/(1+q) = " + fmt(r));
    }
  }
  g.note(std::to_string(q_points) + " points with q <= 1, max q/(1+q) " + fmt(worst_bound));
  return g.done();
}

// Figure checkpoints and byte stability against the stored golden files.
Outcome ac9() {
  Gate g;
  const Table f2 = emit_figure_data("fig2");
  const std::size_t col = f2.column(lambda_label("omega", kSqrtHalfPi));
  double peak = 0.0;
  for (const auto& r : f2.rows) peak = std::max(peak, std::abs(r[col]));
  g.expect(std::abs(peak - 1.0) <= 1e-3, "fig2 max |Omega| = " + fmt(peak));

  const Table f3 = emit_figure_data("fig3");
  std::size_t arg = 0;
  for (std::size_t i = 0; i < f3.rows.size(); ++i) {
    if (f3.rows[i][1] < f3.rows[arg][1]) arg = i;
  }
  g.expect(f3.rows[arg][0] == 1.0, "fig3 minimum at xi = " + fmt(f3.rows[arg][0]));

  const Table f4 = emit_figure_data("fig4");
  const auto peaks = local_maxima(f4, 1);
  std::string where;
  for (auto i : peaks) where += (where.empty() ? "" : ", ") + fmt(f4.rows[i][0]);
  g.expect(peaks.size() == 2, "fig4 has " + std::to_string(peaks.size()) + " local maxima");
  if (peaks.size() == 2) {
    g.expect(std::abs(f4.rows[peaks[0]][0] - 0.1184) <= 1e-3, "fig4 first peak at " + fmt(f4.rows[peaks[0]][0]));
    g.expect(std::abs(f4.rows[peaks[1]][0] - 1.5656) <= 1e-3, "fig4 second peak at " + fmt(f4.rows[peaks[1]][0]));
  }

  std::size_t golden = 0;
  for (const char* id : {"fig2", "fig3", "fig4"}) {
    const std::string a = emit_figure_data(id).to_csv();
    g.expect(a == emit_figure_data(id).to_csv(), std::string(id) + " differs between runs");
    const auto path = std::filesystem::path(FASTLIP_GOLDEN_DIR) / (std::string(id) + ".csv");
    if (!std::filesystem::exists(path)) {
      g.expect(false, "missing golden " + path.string());
      continue;
    }
    g.expect(a == read_text_file(path), std::string(id) + " differs from golden file");
    ++golden;
  }
  g.note("fig4 peaks at " + where + ", " + std::to_string(golden) + " golden files match");
  return g.done();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 affine optimality", ac1},       {"AC2 log-domain contraction", ac2},
      {"AC3 Rayleigh constants", ac3},      {"AC4 exponential constants", ac4},
      {"AC5 smoothed gradient bound", ac5}, {"AC6 type-II qualifier", ac6},
      {"AC7 async robustness", ac7},        {"AC8 qualifier coherence", ac8},
      {"AC9 figure data", ac9}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.note.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
