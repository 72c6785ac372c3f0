// fastlip: solve, qualify, smooth, verify and classify power-control scenarios.
//
// Exit status: 0 success, 1 infeasible or not converged, 2 invalid input.
// Artifacts go to --out, else $FASTLIP_OUT, else ./fastlip_out. Every run
// leaves a manifest.json next to its outputs.

#include "fastlip/fastlip.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using fastlip::Vector;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 1;
constexpr int kInvalid = 2;

struct RunConfig {
  std::string command;
  std::string scenario;
  std::uint64_t seed = 1;
  std::string out;
  // solve / verify
  double tol = 1e-10;
  std::size_t max_iters = 100000;
  std::size_t delay = 0;
  bool async = false;
  bool project = false;
  std::optional<double> p0;
  // qualify / classify
  std::size_t samples = 1000;
  std::string coords = "log";
  std::string norm = "one";
  int k_max = fastlip::kDefaultQkMax;
  // smooth
  std::string fading = "rayleigh";
  double lambda = 1.0;
  double zmin = fastlip::kDefaultZmin;
  std::optional<double> alpha;
  std::string emit = "omega-curve";
  std::string figure;
  // verify
  std::size_t grid_budget = 1'000'000;
};

json config_json(const RunConfig& c) {
  json j{{"command", c.command}, {"seed", c.seed}, {"out", c.out}};
  if (!c.scenario.empty()) j["scenario"] = c.scenario;
  if (c.command == "solve" || c.command == "verify") {
    j["tol"] = c.tol;
    j["max_iters"] = c.max_iters;
    j["async"] = c.async;
    j["delay"] = c.delay;
    j["project"] = c.project;
    j["p0"] = c.p0 ? json(*c.p0) : json(nullptr);
  }
  if (c.command == "verify") j["grid_budget"] = c.grid_budget;
  if (c.command == "qualify" || c.command == "classify") {
    j["samples"] = c.samples;
    j["coords"] = c.coords;
    j["norm"] = c.norm;
    j["k_max"] = c.k_max;
  }
  if (c.command == "smooth") {
    j["fading"] = c.fading;
    j["lambda"] = c.lambda;
    j["zmin"] = c.zmin;
    j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
    j["emit"] = c.emit;
    j["figure"] = c.figure;
  }
  return j;
}

class Run {
 public:
  explicit Run(RunConfig cfg) : cfg_(std::move(cfg)), dir_(cfg_.out) {}

  void write(const std::string& name, const std::string& content) {
    fastlip::write_file_atomic(dir_ / name, content);
    outputs_.push_back(name);
  }

  void set_scenario(const fastlip::Scenario& s) { scenario_ = fastlip::scenario_to_json(s); }

  void finish(int status, const std::string& message) {
    json m;
    m["fastlip_version"] = fastlip::kVersion;
    m["config"] = config_json(cfg_);
    if (!scenario_.is_null()) m["scenario"] = scenario_;
    m["outputs"] = outputs_;
    m["exit_status"] = status;
    if (!message.empty()) m["message"] = message;
    fastlip::write_file_atomic(dir_ / "manifest.json", m.dump(2) + "\n");
  }

  const RunConfig& cfg() const { return cfg_; }

 private:
  RunConfig cfg_;
  fs::path dir_;
  json scenario_;
  std::vector<std::string> outputs_;
};

fastlip::FlProblem problem_of(const fastlip::Scenario& s, const std::string& coords) {
  auto model = fastlip::build_model(s);
  auto cost = fastlip::build_cost(s);
  if (coords == "power") return fastlip::to_power_problem(model, cost, s.box);
  return fastlip::to_log_problem(model, cost, s.box);
}

Vector start_point(const RunConfig& c, const fastlip::Scenario& s) {
  const auto n = static_cast<Eigen::Index>(s.size());
  if (c.p0) return Vector::Constant(n, *c.p0);
  // geometric midpoint of the box
  Vector p(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lo = s.box.lower(i) > 0 ? s.box.lower(i) : 1e-9 * s.box.upper(i);
    p(i) = std::sqrt(lo * s.box.upper(i));
  }
  return p;
}

fastlip::IterationTrace solve_with(const RunConfig& c, const fastlip::InterferenceFunction& m, const Vector& p0,
                                   const fastlip::Scenario& s) {
  fastlip::SolverSettings st;
  st.tol = c.tol;
  st.max_iters = c.max_iters;
  st.project = c.project;
  if (c.project) st.box = s.box;
  if (c.async) return fastlip::solve_async(m, p0, {c.delay, c.seed}, st);
  return fastlip::solve_sync(m, p0, st);
}

int cmd_solve(Run& run) {
  const auto& c = run.cfg();
  const auto s = fastlip::load_scenario(c.scenario);
  run.set_scenario(s);
  const auto m = fastlip::build_model(s);
  const auto t = solve_with(c, *m, start_point(c, s), s);
  run.write("trace.csv", fastlip::trace_table(t).to_csv());
  std::cout << "verdict: " << fastlip::to_string(t.verdict) << "\n"
            << "iterations: " << t.iterations << "\n"
            << "residual: " << fastlip::format_number(t.residual) << "\n";
  if (t.clamped) std::cout << "note: projection onto the box was active\n";
  std::cout << "p*:";
  for (Eigen::Index i = 0; i < t.p_star.size(); ++i) std::cout << " " << fastlip::format_number(t.p_star(i));
  std::cout << "\n";
  return t.verdict == fastlip::SolveVerdict::converged ? kOk : kInfeasible;
}

int cmd_qualify(Run& run) {
  const auto& c = run.cfg();
  const auto s = fastlip::load_scenario(c.scenario);
  run.set_scenario(s);
  const auto lp = problem_of(s, c.coords);
  fastlip::QualifyOptions opt;
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.norm = c.norm == "inf" ? fastlip::ContractionNorm::inf : fastlip::ContractionNorm::one;
  opt.k_max = c.k_max;
  const auto r = fastlip::qualify(lp, opt);
  const std::string table = fastlip::report_table(r);
  run.write("report.json", fastlip::to_json(r).dump(2) + "\n");
  run.write("report.txt", table);
  std::cout << table;
  return kOk;
}

int cmd_classify(Run& run) {
  const auto& c = run.cfg();
  const auto s = fastlip::load_scenario(c.scenario);
  run.set_scenario(s);
  const auto m = fastlip::build_model(s);
  json j;
  j["model"] = m->name();
  j["declared"] = fastlip::to_string(m->declared_class());
  const auto add = [&](const char* name, const fastlip::ClassVerdict& v) {
    json e{{"holds", v.holds}, {"samples", v.samples}, {"seed", v.seed}};
    if (v.witness) {
      e["property"] = v.witness->property;
      e["witness"] = std::vector<double>(v.witness->p.data(), v.witness->p.data() + v.witness->p.size());
      e["c"] = v.witness->c;
    }
    j[name] = e;
    std::cout << name << ": " << (v.holds ? "holds" : "fails") << "\n";
  };
  add("standard", fastlip::classify_standard(*m, s.box, c.samples, c.seed));
  add("type2", fastlip::classify_type2(*m, s.box, c.samples, c.seed));
  add("two_sided", fastlip::classify_two_sided(*m, s.box, c.samples, c.seed));
  run.write("classify.json", j.dump(2) + "\n");
  return kOk;
}

int cmd_smooth(Run& run) {
  const auto& c = run.cfg();
  if (!c.figure.empty()) {
    run.write(c.figure + ".csv", fastlip::emit_figure_data(c.figure).to_csv());
    std::cout << "wrote " << c.figure << ".csv\n";
    return kOk;
  }
  const auto fading = c.fading == "exponential" ? fastlip::FadingModel::exponential(c.lambda)
                                                : fastlip::FadingModel::rayleigh(c.lambda);
  fastlip::Table t;
  if (c.emit == "omega-curve") {
    t = fastlip::omega_curve(fading, c.zmin);
  } else if (c.emit == "sigma-curve") {
    if (c.fading != "exponential") throw fastlip::DomainError("sigma-curve needs --fading exponential");
    t = fastlip::sigma_curve(c.zmin);
  } else {
    t = fastlip::psi_curve();
  }
  run.write(c.emit + ".csv", t.to_csv());
  const double bound = fastlip::max_abs_omega(fading, c.zmin);
  std::cout << "max |Omega| (z >= " << fastlip::format_number(c.zmin) << "): " << fastlip::format_number(bound) << "\n";
  if (c.alpha) {
    std::cout << "alpha = " << fastlip::format_number(*c.alpha) << ": "
              << (bound <= *c.alpha ? "bound satisfied" : "bound exceeded") << "\n";
  }
  return kOk;
}

/// Solver against the independent oracles: closed form for affine models,
/// grid search for everything else.
int cmd_verify(Run& run) {
  const auto& c = run.cfg();
  const auto s = fastlip::load_scenario(c.scenario);
  run.set_scenario(s);
  const auto m = fastlip::build_model(s);
  json j;
  bool ok = true;
  std::optional<Vector> closed;
  if (s.interference.kind == "affine") {
    closed = fastlip::affine_fixed_point(fastlip::network_of(s));  // throws InfeasibleError
  }
  const auto t = solve_with(c, *m, start_point(c, s), s);
  j["solver"] = {{"verdict", fastlip::to_string(t.verdict)}, {"iterations", t.iterations}, {"residual", t.residual}};
  j["solver"]["p_star"] = std::vector<double>(t.p_star.data(), t.p_star.data() + t.p_star.size());
  if (t.verdict != fastlip::SolveVerdict::converged) ok = false;
  if (closed) {
    const double rel = (t.p_star - *closed).lpNorm<Eigen::Infinity>() / closed->lpNorm<Eigen::Infinity>();
    j["closed_form"] = {{"p_star", std::vector<double>(closed->data(), closed->data() + closed->size())},
                        {"relative_error", rel}};
    ok = ok && rel <= 1e-8;
    std::cout << "closed form relative error: " << fastlip::format_number(rel) << "\n";
  }
  if (s.box.strictly_positive()) {
    const auto grid = fastlip::GridSpec::with_budget(s.box, c.grid_budget);
    const auto cost = fastlip::build_cost(s);
    const auto g = fastlip::grid_pareto_optimum(*m, cost, grid);
    const auto cmp = fastlip::compare_to_grid(cost, grid, t.p_star, g);
    j["grid"] = {{"points_per_dim", grid.points_per_dim},
                 {"feasible", g.feasible},
                 {"p_best", std::vector<double>(g.p_best.data(), g.p_best.data() + g.p_best.size())},
                 {"cost_gap", cmp.cost_gap},
                 {"one_cell_variation", cmp.tolerance},
                 {"cell_distance", cmp.cells},
                 {"pareto_set_size", g.pareto_set.size()}};
    ok = ok && cmp.agrees;
    std::cout << "grid cost gap: " << fastlip::format_number(cmp.cost_gap) << " (one-cell variation "
              << fastlip::format_number(cmp.tolerance) << ", " << fastlip::format_number(cmp.cells) << " cells)\n";
  }
  j["agrees"] = ok;
  run.write("verify.json", j.dump(2) + "\n");
  std::cout << (ok ? "verify: agree" : "verify: disagree") << "\n";
  return ok ? kOk : kInfeasible;
}

std::string default_out_dir() {
  if (const char* env = std::getenv("FASTLIP_OUT"); env && *env) return env;
  return "fastlip_out";
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Fast-Lipschitz power control toolkit"};
  app.set_version_flag("--version", std::string(fastlip::kVersion));
  app.require_subcommand(1);
  app.add_option("--out", cfg.out, "Output directory (default $FASTLIP_OUT or ./fastlip_out)");
  app.add_option("--seed", cfg.seed, "Seed for sampling and delay schedules")->capture_default_str();

  const auto scenario_arg = [&](CLI::App* sub) {
    sub->add_option("scenario", cfg.scenario, "Scenario JSON file")->required();
  };
  const auto solver_opts = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol)->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", cfg.max_iters)->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_flag("--async", cfg.async, "Bounded-delay asynchronous iteration");
    sub->add_option("--delay", cfg.delay, "Maximum delay D for --async")->capture_default_str();
    sub->add_flag("--project", cfg.project, "Clamp iterates to the scenario box");
    sub->add_option("--p0", cfg.p0, "Start every link at this power (default: box midpoint)");
  };

  auto* solve = app.add_subcommand("solve", "Fixed-point iteration; writes trace.csv");
  scenario_arg(solve);
  solver_opts(solve);

  auto* qual = app.add_subcommand("qualify", "Qualifying conditions; writes report.json and report.txt");
  scenario_arg(qual);
  qual->add_option("--samples", cfg.samples)->capture_default_str()->check(CLI::PositiveNumber);
  qual->add_option("--coords", cfg.coords)->capture_default_str()->check(CLI::IsMember({"log", "power"}));
  qual->add_option("--norm", cfg.norm, "Contraction norm for Q1/Qk")->capture_default_str()->check(
      CLI::IsMember({"one", "inf"}));
  qual->add_option("--k-max", cfg.k_max)->capture_default_str()->check(CLI::Range(1, 64));

  auto* smooth = app.add_subcommand("smooth", "Omega, sigma and psi curves; writes <emit>.csv");
  smooth->add_option("--fading", cfg.fading)->capture_default_str()->check(CLI::IsMember({"rayleigh", "exponential"}));
  smooth->add_option("--lambda", cfg.lambda)->capture_default_str()->check(CLI::PositiveNumber);
  smooth->add_option("--zmin", cfg.zmin)->capture_default_str()->check(CLI::PositiveNumber);
  smooth->add_option("--alpha", cfg.alpha, "Compare max |Omega| against this bound")->check(CLI::PositiveNumber);
  smooth->add_option("--emit", cfg.emit)->capture_default_str()->check(
      CLI::IsMember({"omega-curve", "sigma-curve", "psi-curve"}));
  smooth->add_option("--figure", cfg.figure, "Emit figure data instead (fig1..fig4)")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4"}));

  auto* verify = app.add_subcommand("verify", "Compare the solver with the closed-form and grid oracles");
  scenario_arg(verify);
  solver_opts(verify);
  verify->add_option("--grid-budget", cfg.grid_budget, "Total grid points")->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Sampled standard / type-II / two-sided tests");
  scenario_arg(classify);
  classify->add_option("--samples", cfg.samples)->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  if (cfg.out.empty()) cfg.out = default_out_dir();
  Run run(cfg);
  int status = kOk;
  std::string message;
  try {
    if (cfg.command == "solve") status = cmd_solve(run);
    else if (cfg.command == "qualify") status = cmd_qualify(run);
    else if (cfg.command == "smooth") status = cmd_smooth(run);
    else if (cfg.command == "verify") status = cmd_verify(run);
    else status = cmd_classify(run);
  } catch (const fastlip::InfeasibleError& e) {
    message = e.what();
    status = kInfeasible;
  } catch (const fastlip::Error& e) {
    message = e.what();
    status = kInvalid;
  }
  if (!message.empty()) std::cerr << "fastlip: " << message << "\n";
  try {
    run.finish(status, message);
  } catch (const std::exception& e) {
    std::cerr << "fastlip: cannot write manifest: " << e.what() << "\n";
    return kInvalid;
  }
  return status;
}
