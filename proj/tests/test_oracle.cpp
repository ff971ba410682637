#include <gtest/gtest.h>

#include "fmp.hpp"
#include "support/fuzz.hpp"
#include "support/lp_oracle.hpp"

using namespace fmp;

TEST(Simplex, SmallLp) {
  // min -x - y  s.t.  x + 2y <= 4, 3x + y <= 6, 0 <= x, y <= 10
  MatrixModel m;
  m.add_variable("x", VarKind::Continuous, 0, 10);
  m.add_variable("y", VarKind::Continuous, 0, 10);
  m.add_row("a", {{0, 1}, {1, 2}}, Sense::Le, 4);
  m.add_row("b", {{0, 3}, {1, 1}}, Sense::Le, 6);
  m.set_objective({{0, -1}, {1, -1}});
  std::vector<double> lb{0, 0}, ub{10, 10};
  const auto r = oracle::solve_lp(m, lb, ub);
  ASSERT_EQ(r.status, oracle::LpStatus::Optimal);
  EXPECT_NEAR(r.value, -2.8, 1e-9);
  EXPECT_NEAR(r.x[0], 1.6, 1e-9);
  EXPECT_NEAR(r.x[1], 1.2, 1e-9);
}

TEST(Simplex, EqualityGreaterAndInfeasible) {
  MatrixModel m;
  m.add_variable("x", VarKind::Continuous, 0, 5);
  m.add_variable("y", VarKind::Continuous, 1, 5);
  m.add_row("e", {{0, 1}, {1, 1}}, Sense::Eq, 4);
  m.add_row("g", {{0, 1}, {1, -1}}, Sense::Ge, 1);
  m.set_objective({{0, 1}});
  std::vector<double> lb{0, 1}, ub{5, 5};
  auto r = oracle::solve_lp(m, lb, ub);
  ASSERT_EQ(r.status, oracle::LpStatus::Optimal);
  EXPECT_NEAR(r.value, 2.5, 1e-9);
  ub[0] = 2;
  r = oracle::solve_lp(m, lb, ub);
  EXPECT_EQ(r.status, oracle::LpStatus::Infeasible);
}

TEST(BranchAndBound, Knapsack) {
  // max 5a + 4b + 3c  s.t. 2a + 3b + c <= 4 (binary) -> a + c = 8
  MatrixModel m;
  for (const char* n : {"a", "b", "c"}) m.add_variable(n, VarKind::Binary, 0, 1);
  m.add_row("w", {{0, 2}, {1, 3}, {2, 1}}, Sense::Le, 4);
  m.set_objective({{0, -5}, {1, -4}, {2, -3}});
  const auto r = oracle::solve_mip(m, true);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.value, -8.0);
  EXPECT_EQ(r.x, (std::vector<double>{1, 0, 1}));
}

TEST(BranchAndBound, AgreesWithBruteForceOnTwentyInstances) {
  int feasible = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = fuzz::tiny_instance(500 + seed);
    const auto bf = brute_force_solve(inst, ObjectiveKind::MinChecks);
    const auto mip = oracle::solve_mip(mip::build_fixed_model(inst, ObjectiveKind::MinChecks), true);
    ASSERT_FALSE(mip.node_limit);
    EXPECT_EQ(bf.feasible, mip.feasible) << "seed " << seed;
    if (bf.feasible && mip.feasible) { EXPECT_NEAR(bf.value, mip.value, 1e-6) << "seed " << seed; }
    feasible += bf.feasible;
  }
  EXPECT_GE(feasible, 4);
}

TEST(BruteForce, OptimumIsValidatedAndScored) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = fuzz::tiny_instance(900 + seed);
    for (auto kind : {ObjectiveKind::MinChecks, ObjectiveKind::MinChecksMaxRft}) {
      const auto r = brute_force_solve(inst, kind);
      if (!r.feasible) continue;
      EXPECT_TRUE(check_solution(inst, r.solution).feasible());
      EXPECT_EQ(objective(inst, r.solution, kind), r.value);
    }
  }
}
