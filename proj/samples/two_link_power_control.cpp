// Two links sharing a channel: qualify the log-domain problem, then iterate.

#include "fastlip/fastlip.hpp"

#include <iostream>
#include <memory>

int main() {
  using namespace fastlip;
  const NetworkScenario scn = zoo::affine_two_link();
  auto model = std::make_shared<const AffineInterference>(scn);
  const FlProblem lp = to_log_problem(model, CostModel::sum(), scn.box);

  const QualificationReport report = qualify(lp);
  std::cout << report_table(report) << "\n";

  const IterationTrace trace = solve_sync(*model, Vector::Ones(2));
  std::cout << "iterations " << trace.iterations << ", residual " << format_number(trace.residual) << "\n";
  std::cout << "p* = " << trace.p_star.transpose() << "  (closed form " << affine_fixed_point(scn).transpose() << ")\n";

  // Same fixed point with stale neighbor values, up to 5 steps old.
  const IterationTrace async = solve_async(*model, Vector::Ones(2), {5, 42});
  std::cout << "async p* = " << async.p_star.transpose() << " after " << async.iterations << " steps\n";
  return 0;
}
