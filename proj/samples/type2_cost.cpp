// Type-II monomial interference: build the weighted cost that makes the
// fixed point optimal and check it against a brute-force grid.

#include "fastlip/fastlip.hpp"

#include <iostream>
#include <memory>

int main() {
  using namespace fastlip;
  auto model = zoo::monomial_type2();
  const PowerBox box = PowerBox::uniform(2, 1e-2, 10.0);

  const BBound bound = estimate_b_bound(to_log_problem(model, CostModel::sum(), box), 200, 1);
  const Vector c = Vector::Ones(2);
  const CostModel cost = construct_t2_cost(bound, c);
  const Qt2Result q = check_Qt2(to_log_problem(model, cost, box), c, 1000, 1);
  std::cout << "rho(B) = " << bound.rho << ", s = " << q.s->transpose() << ", Qt2 " << to_string(q.entry.verdict) << "\n";

  const IterationTrace t = solve_sync(*model, Vector::Ones(2));
  const GridSpec grid(box, 60);
  const GridResult g = grid_pareto_optimum(*model, cost, grid);
  std::cout << "fixed point  " << t.p_star.transpose() << "\n"
            << "grid optimum " << g.p_best.transpose() << " (" << grid.cell_distance(g.p_best, t.p_star)
            << " cells away)\n";
  return 0;
}
