#include <gtest/gtest.h>

#include <chrono>

#include "hgs/bdata.hpp"
#include "hgs/closed_form.hpp"
#include "hgs/optimize.hpp"
#include "hgs/targets.hpp"

using namespace hgs;

namespace {

Gate squeeze_gate(double r) {
  Gate g = Gate::identity(1);
  g.zeta(0) = r;
  return g;
}

FockVector superposition(const std::vector<std::pair<int, cplx>>& terms, int cutoff) {
  FockVector v = FockVector::zeros(1, cutoff);
  for (const auto& [n, c] : terms) v.at({n}) = c;
  v.data /= v.norm();
  return v;
}

OptimizationProblem cat_problem(double zeta, int lo, int hi, double ratio, int restarts = 8) {
  OptimizationProblem pr;
  pr.target.gate = squeeze_gate(zeta);
  pr.target.coefficients = superposition({{lo, ratio}, {hi, 1.0}}, hi + 1);
  pr.n_modes = 2;
  pr.config.restarts = restarts;
  return pr;
}

double zeta_of(const OptimizationResult& r) {
  return std::abs(herald(state_from_circuit(r.circuit), r.pattern, r.heralded).gate.zeta(0));
}

}  // namespace

TEST(Optimize, CandidatePatterns) {
  EXPECT_EQ(candidate_patterns(3, {1, 2}, 200).size(), 4u);
  EXPECT_EQ(candidate_patterns(4, {1, 2, 3}, 200).size(), 15u);
  EXPECT_EQ(candidate_patterns(4, {1, 2, 3}, 5).size(), 5u);
  const auto p = candidate_patterns(2, {3, 5}, 200);
  EXPECT_EQ(p[0].counts, (std::vector<int>{2, 0}));
  EXPECT_EQ(p[2].modes, (std::vector<int>{3, 5}));
  EXPECT_EQ(target_photon_number(cubic_state(0.1)), 3);
}

TEST(Optimize, EvenCatRowByElimination) {
  const auto res = optimize(cat_problem(0.1796, 0, 2, 1.7885));
  ASSERT_TRUE(res.feasible);
  EXPECT_EQ(res.strategy, "elimination");
  EXPECT_NEAR(100 * res.probability, 11.20, 0.15);
  const double closed = closed_form_optimum(Family::kEvenCat02, RVec::Constant(1, 1.7885)).probability;
  EXPECT_NEAR(res.probability, closed, 1e-7);
  EXPECT_NEAR(res.probability_check, res.probability, 1e-8);
  EXPECT_GT(res.fidelity, 1 - 1e-9);
  EXPECT_NEAR(zeta_of(res), 0.1796, 1e-9);
  const GatedFock approx{squeeze_gate(0.1796), superposition({{0, 1.7885}, {2, 1.0}}, 3)};
  EXPECT_GE(fidelity(approx, cat_state(1.0, Parity::kEven, 40), 40), 0.9998);
  EXPECT_LT(max_singular_value(res.b), 1 - 1e-9);
  EXPECT_TRUE(validate_state(state_from_circuit(res.circuit)).valid);
}

TEST(Optimize, OddCatRowByElimination) {
  const auto res = optimize(cat_problem(0.0306, 1, 3, 15.507));
  ASSERT_TRUE(res.feasible);
  EXPECT_EQ(res.pattern.counts, std::vector<int>{3});
  EXPECT_NEAR(100 * res.probability, 2.97, 0.1);
  EXPECT_NEAR(zeta_of(res), 0.0306, 1e-9);
  EXPECT_NEAR(res.probability_check, res.probability, 1e-8);
}

TEST(Optimize, PenaltyRouteAgreesWithClosedForm) {
  auto pr = cat_problem(0.0, 0, 2, 1.7885, 6);
  pr.config.strategy = Strategy::kPenalty;
  const auto res = optimize(pr);
  ASSERT_TRUE(res.feasible);
  const double closed = closed_form_optimum(Family::kEvenCat02, RVec::Constant(1, 1.7885)).probability;
  EXPECT_GE(res.probability, closed - 1e-4);
  EXPECT_LE(res.probability, closed + 1e-9);
  EXPECT_GT(res.fidelity, 1 - 1e-8);
}

TEST(Optimize, GateAbsorptionLeavesProbability) {
  auto plain = cat_problem(0.0, 0, 2, 1.2, 4);
  auto gated = plain;
  gated.target.gate.zeta(0) = cplx(0.4, 0.2);
  gated.target.gate.d(0) = cplx(0.3, -0.5);
  const auto a = optimize(plain), b = optimize(gated);
  ASSERT_TRUE(a.feasible && b.feasible);
  EXPECT_NEAR(a.probability, b.probability, 1e-8);
  EXPECT_NEAR(b.probability_check, a.probability, 1e-8);
  EXPECT_GT(b.fidelity, 1 - 1e-8);
  EXPECT_GT((a.b - b.b).norm(), 1e-3);
}

TEST(Optimize, ClosedFormTargets) {
  OptimizationProblem pr;
  pr.target.gate = Gate::identity(2);
  pr.target.coefficients = noon_state(2, 3);
  pr.n_modes = 4;
  const auto noon = optimize(pr);
  ASSERT_TRUE(noon.feasible);
  EXPECT_EQ(noon.strategy, "closed-form:noon-2");
  EXPECT_NEAR(noon.probability, 1.0 / 16, 1e-9);
  EXPECT_NEAR(noon.probability_check, 1.0 / 16, 1e-9);
  EXPECT_GT(noon.fidelity, 1 - 1e-10);

  pr.target.gate = Gate::identity(4);
  pr.target.coefficients = w_state(4);
  pr.n_modes = 5;
  const auto w = optimize(pr);
  EXPECT_EQ(w.strategy, "closed-form:w-state");
  EXPECT_NEAR(w.probability, 0.25, 1e-9);
  EXPECT_GT(w.fidelity, 1 - 1e-8);
}

TEST(Optimize, PenaltyNoonTwoStaysBelowClosedForm) {
  OptimizationProblem pr;
  pr.target.gate = Gate::identity(2);
  pr.target.coefficients = noon_state(2, 3);
  pr.n_modes = 4;
  pr.patterns = {DetectionPattern{{2, 3}, {1, 1}}};
  pr.config.strategy = Strategy::kPenalty;
  pr.config.restarts = 4;
  const auto res = optimize(pr);
  if (res.feasible) {
    EXPECT_LE(res.probability, 1.0 / 16 + 1e-9);
    EXPECT_NEAR(res.probability_check, res.probability, 1e-8);
  }
  EXPECT_LT(res.infidelity, 1e-6);
}

TEST(Optimize, FidelityFloorRelaxesConstraint) {
  auto pr = cat_problem(0.0, 0, 2, 1.7885, 4);
  pr.mode = ConstraintMode::kFidelityFloor;
  pr.fidelity_floor = 0.99;
  const auto res = optimize(pr);
  ASSERT_TRUE(res.feasible);
  EXPECT_EQ(res.strategy, "penalty");
  EXPECT_GE(res.fidelity, 0.99 - 1e-9);
  const double closed = closed_form_optimum(Family::kEvenCat02, RVec::Constant(1, 1.7885)).probability;
  EXPECT_GE(res.probability, closed - 1e-6);
}

TEST(Optimize, InfeasibleTargetIsReported) {
  // c_2 = 0 forces mu = 0, and then c_0 must vanish too.
  OptimizationProblem pr;
  pr.target.gate = Gate::identity(1);
  pr.target.coefficients = superposition({{0, 1.0}, {1, 1.0}, {3, 1.0}}, 4);
  pr.n_modes = 2;
  pr.config.restarts = 3;
  const auto res = optimize(pr);
  EXPECT_FALSE(res.feasible);
  EXPECT_GT(res.infidelity, 1e-6);
  EXPECT_EQ(res.trace.size(), 3u);
}

TEST(Optimize, Deterministic) {
  auto pr = cat_problem(0.3, 1, 3, 2.0, 4);
  const auto a = optimize(pr), b = optimize(pr);
  EXPECT_EQ(a.probability, b.probability);
  EXPECT_EQ((a.b - b.b).norm(), 0.0);
}

TEST(Optimize, Errors) {
  auto pr = cat_problem(0.0, 0, 2, 1.0);
  pr.target.coefficients.data *= 2.0;
  EXPECT_THROW(optimize(pr), Error);
  pr = cat_problem(0.0, 0, 2, 1.0);
  pr.patterns = {DetectionPattern{{1}, {3}}};
  EXPECT_THROW(optimize(pr), Error);
  pr = cat_problem(0.0, 0, 2, 1.0);
  pr.n_modes = 1;
  EXPECT_THROW(optimize(pr), Error);
  pr = cat_problem(0.0, 0, 2, 1.0);
  pr.target.coefficients = superposition({{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}}, 4);
  EXPECT_THROW(optimize(pr), Error);  // four amplitudes need more than two modes
  pr = cat_problem(0.0, 0, 2, 1.0);
  pr.config.strategy = Strategy::kClosedForm;
  EXPECT_THROW(optimize(pr), Error);
}
