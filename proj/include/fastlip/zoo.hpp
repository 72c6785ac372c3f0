#pragma once

// Small bundled instances used by tests, samples and the CLI.

#include "fastlip/cost.hpp"
#include "fastlip/interference.hpp"
#include "fastlip/smoothing.hpp"

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fastlip::zoo {

/// G = [[1, .1], [.1, 1]], tau = 1, eta = .1, box [1e-3, 10]; p* = [1/9, 1/9].
inline NetworkScenario affine_two_link() {
  NetworkScenario s;
  s.gains.resize(2, 2);
  s.gains << 1.0, 0.1, 0.1, 1.0;
  s.tau = Vector::Ones(2);
  s.eta = Vector::Constant(2, 0.1);
  s.box = PowerBox::uniform(2, 1e-3, 10.0);
  return s;
}

inline NetworkScenario affine_three_link() {
  NetworkScenario s;
  s.gains.resize(3, 3);
  s.gains << 1.0, 0.2, 0.1,
             0.1, 2.0, 0.3,
             0.2, 0.1, 1.5;
  s.tau = (Vector(3) << 1.0, 2.0, 1.5).finished();
  s.eta = (Vector(3) << 0.1, 0.2, 0.05).finished();
  s.box = PowerBox::uniform(3, 1e-3, 10.0);
  return s;
}

/// I_i = 1 / (0.2 p_j + 0.5); fixed point p_i = (sqrt(1.05) - 0.5) / 0.4.
inline std::shared_ptr<const OpportunisticInterference> opportunistic_two_link() {
  Matrix g(2, 2);
  g << 0.0, 0.2, 0.2, 0.0;
  return std::make_shared<const OpportunisticInterference>(g, Vector::Constant(2, 0.5), Vector::Ones(2));
}

inline double opportunistic_two_link_fixed_point() { return (std::sqrt(1.05) - 0.5) / 0.4; }

/// Exponents A >= 0 with row sums 0.3 and 0.2.
inline std::shared_ptr<const MonomialInterference> monomial_standard() {
  Matrix a(2, 2);
  a << 0.0, 0.3, 0.2, 0.0;
  return std::make_shared<const MonomialInterference>(a, Vector::Constant(2, std::log(0.5)));
}

/// Exponents A <= 0 with rho(|A|) = 0.3.
inline std::shared_ptr<const MonomialInterference> monomial_type2() {
  Matrix a(2, 2);
  a << 0.0, -0.3, -0.3, 0.0;
  return std::make_shared<const MonomialInterference>(a, Vector::Zero(2));
}

inline std::shared_ptr<const ConstantInterference> constant_two_link() {
  return std::make_shared<const ConstantInterference>((Vector(2) << 0.5, 2.0).finished());
}

/// Affine two-link base, Rayleigh fading with lambda = 2 on both links, b = 1.
inline std::shared_ptr<const SmoothedInterference> smoothed_rayleigh_two_link() {
  auto base = std::make_shared<const AffineInterference>(affine_two_link());
  return std::make_shared<const SmoothedInterference>(base, std::vector<FadingModel>{FadingModel::rayleigh(2.0)}, 1.0);
}

struct Entry {
  std::string name;
  InterferencePtr model;
  PowerBox box;
  CostModel cost;
  bool two_sided = true;    // expected to pass classify_two_sided on the box
  bool contractive = true;  // fixed-point iteration converges from anywhere in the box
};

/// Every bundled model with its box and a default cost.
inline std::vector<Entry> catalog() {
  std::vector<Entry> out;
  out.push_back({"affine-2link", std::make_shared<const AffineInterference>(affine_two_link()),
                 PowerBox::uniform(2, 1e-3, 10.0), CostModel::sum()});
  out.push_back({"affine-3link", std::make_shared<const AffineInterference>(affine_three_link()),
                 PowerBox::uniform(3, 1e-3, 10.0), CostModel::sum()});
  out.push_back({"opportunistic-2link", opportunistic_two_link(), PowerBox::uniform(2, 0.1, 5.0),
                 CostModel::weighted_log_sum(Vector::Ones(2))});
  out.push_back({"monomial-standard", monomial_standard(), PowerBox::uniform(2, 1e-2, 10.0), CostModel::sum()});
  out.push_back({"monomial-type2", monomial_type2(), PowerBox::uniform(2, 1e-2, 10.0),
                 CostModel::weighted_log_sum(Vector::Ones(2))});
  out.push_back({"constant-2link", constant_two_link(), PowerBox::uniform(2, 1e-2, 10.0), CostModel::sum()});
  // z = I / b stays below the sign change of Omega on this box, so the smoothed
  // map is still monotone and two-sided scalable here.
  out.push_back({"smoothed-rayleigh-2link", smoothed_rayleigh_two_link(), PowerBox::uniform(2, 1e-3, 10.0),
                 CostModel::sum(), true, true});
  return out;
}

}  // namespace fastlip::zoo
