#include "fastlip/classify.hpp"
#include "fastlip/logdomain.hpp"
#include "fastlip/oracle.hpp"
#include "fastlip/zoo.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

using namespace fastlip;

namespace {

FlProblem affine_log_problem() {
  const auto s = zoo::affine_two_link();
  return to_log_problem(std::make_shared<const AffineInterference>(s), CostModel::sum(), s.box);
}

std::shared_ptr<const CustomInterference> identity_map(std::size_t n) {
  return std::make_shared<const CustomInterference>(
      "identity", n, InterferenceClass::custom, [](const Vector& p) { return p; },
      [](const Vector& p) { return Gradient(Gradient::Identity(p.size(), p.size())); });
}

}  // namespace

TEST(ToLogProblem, AffineFixedPoint) {
  const FlProblem lp = affine_log_problem();
  const Vector x_star = Vector::Constant(2, std::log(1.0 / 9.0));
  EXPECT_LE((lp.constraint(x_star) - x_star).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((lp.to_power(x_star) - Vector::Constant(2, 1.0 / 9.0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ToLogProblem, ConstantMap) {
  const auto m = zoo::constant_two_link();
  const FlProblem lp = to_log_problem(m, CostModel::sum(), PowerBox::uniform(2, 0.01, 10));
  const Vector x = Vector::Constant(2, 0.7);
  EXPECT_NEAR(lp.constraint(x)(0), std::log(0.5), 1e-15);
  EXPECT_NEAR(lp.constraint(x)(1), std::log(2.0), 1e-15);
  EXPECT_EQ(lp.constraint_gradient(x), Gradient::Zero(2, 2));
}

TEST(ToLogProblem, MonomialIsAffine) {
  const auto m = zoo::monomial_standard();
  const FlProblem lp = to_log_problem(m, CostModel::sum(), PowerBox::uniform(2, 0.01, 10));
  const Vector x = (Vector(2) << 0.3, -1.2).finished();
  const Vector want = m->exponents() * x + m->log_coefficients();
  EXPECT_LE((lp.constraint(x) - want).cwiseAbs().maxCoeff(), 1e-15);
  // Generic route through eval agrees.
  EXPECT_LE((m->InterferenceFunction::log_eval(x) - want).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(ToLogProblem, RejectsNonPositiveBox) {
  const auto s = zoo::affine_two_link();
  EXPECT_THROW(to_log_problem(std::make_shared<const AffineInterference>(s), CostModel::sum(),
                              PowerBox::uniform(2, 0.0, 10.0)),
               DomainError);
}

TEST(LogGradients, MatchFiniteDifferences) {
  for (const auto& e : zoo::catalog()) {
    const FlProblem lp = to_log_problem(e.model, CostModel::weighted_log_sum(Vector::Ones(static_cast<Eigen::Index>(e.model->size()))), e.box);
    for (const Vector& x : lp.sample_points(100, 3)) {
      const Gradient g = lp.constraint_gradient(x);
      const Gradient fd = fd_gradient([&](const Vector& y) { return lp.constraint(y); }, x);
      EXPECT_LE((g - fd).cwiseAbs().maxCoeff() / std::max(1e-3, g.cwiseAbs().maxCoeff()), 1e-4) << e.name;
      const Gradient g0 = lp.objective_gradient(x);
      const Gradient fd0 = fd_gradient([&](const Vector& y) { return lp.objective(y); }, x);
      EXPECT_LE((g0 - fd0).cwiseAbs().maxCoeff() / std::max(1e-3, g0.cwiseAbs().maxCoeff()), 1e-4) << e.name;
    }
  }
}

// grad f(x) = diag(e^x) grad I(e^x) diag(1 / I(e^x)) against a fourth-order
// difference of f itself.
TEST(LogGradients, ChainRuleIdentity) {
  const FlProblem lp = affine_log_problem();
  const AffineInterference& m = static_cast<const AffineInterference&>(lp.model());
  for (const Vector& x : lp.sample_points(50, 8)) {
    const Vector p = x.array().exp().matrix();
    const Gradient chain = p.asDiagonal() * m.gradient(p) * m.eval(p).cwiseInverse().asDiagonal();
    const Gradient fd = fd_gradient([&](const Vector& y) { return lp.constraint(y); }, x, 1e-3, FdScheme::five_point);
    EXPECT_LE((chain - fd).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(LogGradients, AffineEntriesClosedForm) {
  // [grad f]_ij = 0.1 p_i / (0.1 p_i + 0.1) for i != j on the two-link instance.
  const FlProblem lp = affine_log_problem();
  const Vector x = (Vector(2) << std::log(2.0), std::log(0.5)).finished();
  const Gradient g = lp.constraint_gradient(x);
  EXPECT_NEAR(g(0, 1), 0.2 / 0.3, 1e-15);
  EXPECT_NEAR(g(1, 0), 0.05 / 0.15, 1e-15);
  EXPECT_EQ(g(0, 0), 0.0);
}

TEST(FixedPointEquivalence, LogAndPowerResiduals) {
  const FlProblem lp = affine_log_problem();
  Vector x = Vector::Zero(2);
  for (int k = 0; k < 200; ++k) x = lp.constraint(x);
  ASSERT_LE((x - lp.constraint(x)).lpNorm<Eigen::Infinity>(), 1e-10);
  const Vector p = x.array().exp().matrix();
  EXPECT_LE((p - lp.model().eval(p)).lpNorm<Eigen::Infinity>(), 1e-8 * p.lpNorm<Eigen::Infinity>());
  EXPECT_LE((p - affine_fixed_point(zoo::affine_two_link())).lpNorm<Eigen::Infinity>(), 1e-9);
}

TEST(CheckShrinking, AffineTwoLink) {
  const auto r = check_shrinking(affine_log_problem(), 1000, 1);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(r.max_ratio, 1.0);
  EXPECT_GT(r.max_ratio, 0.0);
  ASSERT_TRUE(r.witness.has_value());
}

TEST(CheckShrinking, ConstantMapHasZeroRatio) {
  const FlProblem lp = to_log_problem(zoo::constant_two_link(), CostModel::sum(), PowerBox::uniform(2, 0.01, 10));
  EXPECT_EQ(check_shrinking(lp, 1000, 1).max_ratio, 0.0);
}

TEST(CheckShrinking, IdentityMapFails) {
  const FlProblem lp = to_log_problem(identity_map(2), CostModel::sum(), PowerBox::uniform(2, 0.01, 10));
  const auto r = check_shrinking(lp, 1000, 1);
  EXPECT_NEAR(r.max_ratio, 1.0, 1e-12);
  EXPECT_FALSE(r.holds);
}

TEST(CheckShrinking, RejectsZeroPairs) { EXPECT_THROW(check_shrinking(affine_log_problem(), 0, 1), DomainError); }

TEST(CheckGradNorm1, Examples) {
  const auto r = check_grad_norm1(affine_log_problem(), 1000, 1);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(r.max_norm1, 1.0);

  Matrix a(2, 2);
  a << 0.0, 0.3, 0.3, 0.0;
  const FlProblem mono = to_log_problem(std::make_shared<const MonomialInterference>(a, Vector::Zero(2)),
                                        CostModel::sum(), PowerBox::uniform(2, 0.01, 10));
  EXPECT_DOUBLE_EQ(check_grad_norm1(mono, 1000, 1).max_norm1, 0.3);

  const FlProblem id = to_log_problem(identity_map(2), CostModel::sum(), PowerBox::uniform(2, 0.01, 10));
  const auto ri = check_grad_norm1(id, 100, 1);
  EXPECT_DOUBLE_EQ(ri.max_norm1, 1.0);
  EXPECT_FALSE(ri.holds);
}

// Two-sided scalable on the box implies both Lemma 2 checks pass there.
TEST(LemmaTwo, ConsequenceOnBundledModels) {
  for (const auto& e : zoo::catalog()) {
    if (!classify_two_sided(*e.model, e.box, 1000, 1).holds) continue;
    const FlProblem lp = to_log_problem(e.model, e.cost, e.box);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      EXPECT_TRUE(check_shrinking(lp, 1000, seed).holds) << e.name << " seed " << seed;
      EXPECT_TRUE(check_grad_norm1(lp, 1000, seed).holds) << e.name << " seed " << seed;
    }
  }
}

TEST(ScaledProblem, GradientsFollowTheChangeOfVariables) {
  const auto m = zoo::opportunistic_two_link();
  const FlProblem lp = to_log_problem(m, CostModel::weighted_log_sum(Vector::Ones(2)), PowerBox::uniform(2, 0.1, 5));
  const Vector s = (Vector(2) << 1.5, 0.7).finished();
  const FlProblem sp = lp.scaled(s);
  for (const Vector& y : sp.sample_points(20, 2)) {
    const Gradient g = sp.constraint_gradient(y);
    const Gradient fd = fd_gradient([&](const Vector& v) { return sp.constraint(v); }, y);
    EXPECT_LE((g - fd).cwiseAbs().maxCoeff(), 1e-6);
    const Gradient g0 = sp.objective_gradient(y);
    const Gradient fd0 = fd_gradient([&](const Vector& v) { return sp.objective(v); }, y);
    EXPECT_LE((g0 - fd0).cwiseAbs().maxCoeff(), 1e-6);
  }
  EXPECT_THROW(sp.scaled(s), DomainError);
}
