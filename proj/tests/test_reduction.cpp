#include <gtest/gtest.h>

#include "fmp.hpp"
#include "support/fuzz.hpp"

using namespace fmp;

namespace {

FisInstance two_tasks(std::vector<std::string> employees) {
  FisInstance fis;
  fis.employees = employees;
  fis.tasks.push_back({"p", 1, 3, employees});
  fis.tasks.push_back({"q", 2, 4, employees});
  return fis;
}

}  // namespace

TEST(Reduction, InstanceShape) {
  const auto inst = fis_to_fmp(two_tasks({"e1", "e2"}));
  EXPECT_TRUE(inst.reduction);
  EXPECT_EQ(inst.num_periods(), 4);
  EXPECT_EQ(inst.num_aircraft(), 2);
  EXPECT_EQ(inst.params.check_duration, 0);
  EXPECT_EQ(inst.params.calendar_max, 0);
  EXPECT_EQ(inst.params.calendar_min, 0);
  EXPECT_EQ(inst.params.flight_max, 0.0);
  EXPECT_EQ(inst.params.default_usage, 0.0);
  ASSERT_EQ(inst.num_missions(), 2);
  const auto& m = inst.missions[1];
  EXPECT_EQ(m.window, (PeriodRange{2, 4}));
  EXPECT_EQ(m.min_assign, 2);
  EXPECT_EQ(m.required, 1);
  EXPECT_EQ(m.hours, 0.0);
  for (const auto& a : inst.fleet) EXPECT_EQ(a.rct_init, 5);
  ASSERT_EQ(inst.clusters.size(), 1u);
  EXPECT_EQ(inst.clusters[0].members.size(), 2u);
  for (double f : inst.clusters[0].sustain_floor) EXPECT_EQ(f, 0.0);
  const auto sets = derive_index_sets(inst);
  EXPECT_EQ(sets.eligible[0], (std::vector<int>{0, 1}));
}

TEST(Reduction, EligibilityCarriesOver) {
  FisInstance fis;
  fis.employees = {"x", "y", "z"};
  fis.tasks.push_back({"t", 1, 2, {"z", "x"}});
  const auto inst = fis_to_fmp(fis);
  EXPECT_EQ(derive_index_sets(inst).eligible[0], (std::vector<int>{0, 2}));
}

TEST(Reduction, OneEmployeeOverlapInfeasible) {
  const auto r = brute_force_solve(fis_to_fmp(two_tasks({"e"})), ObjectiveKind::MinChecks);
  EXPECT_FALSE(r.feasible);
}

TEST(Reduction, TwoEmployeesFeasibleAndMapped) {
  const auto fis = two_tasks({"e1", "e2"});
  const auto r = brute_force_solve(fis_to_fmp(fis), ObjectiveKind::MinChecks);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.value, 0.0);
  const auto map = fmp_solution_to_fis(fis, r.solution);
  EXPECT_EQ(map.size(), 2u);
  EXPECT_NE(map.at("p"), map.at("q"));
  EXPECT_TRUE(fuzz::valid_assignment(fis, map));
}

TEST(Reduction, EmptyTaskList) {
  FisInstance fis;
  fis.employees = {"e"};
  const auto inst = fis_to_fmp(fis);
  EXPECT_EQ(inst.num_periods(), 0);
  const auto r = brute_force_solve(inst, ObjectiveKind::MinChecks);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(fmp_solution_to_fis(fis, r.solution).empty());
}

TEST(Reduction, SingleTaskForcedMap) {
  FisInstance fis;
  fis.employees = {"a", "b"};
  fis.tasks.push_back({"only", 2, 5, {"b"}});
  const auto r = brute_force_solve(fis_to_fmp(fis), ObjectiveKind::MinChecks);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(fmp_solution_to_fis(fis, r.solution), (TaskAssignment{{"only", "b"}}));
}

TEST(Reduction, InfeasibleSolutionRefused) {
  const auto fis = two_tasks({"e1", "e2"});
  const auto inst = fis_to_fmp(fis);
  EXPECT_THROW(fmp_solution_to_fis(fis, Solution::blank(inst)), ReductionError);
  EXPECT_THROW(fmp_solution_to_fis(fis, Solution(1, 4)), ReductionError);
}

TEST(Reduction, InvalidFisRejected) {
  FisInstance fis;
  fis.employees = {"e"};
  fis.tasks.push_back({"t", 3, 3, {"e"}});
  EXPECT_THROW(fis_to_fmp(fis), ReductionError);
  fis.tasks[0] = {"t", 1, 3, {}};
  EXPECT_THROW(fis_to_fmp(fis), ReductionError);
  fis.tasks[0] = {"t", 1, 3, {"nobody"}};
  EXPECT_THROW(fis_to_fmp(fis), ReductionError);
}

TEST(Reduction, JsonRoundTrip) {
  const auto fis = two_tasks({"e1", "e2"});
  const auto back = fis_from_json(fis_to_json(fis));
  EXPECT_EQ(fis_to_json(back), fis_to_json(fis));
  EXPECT_THROW(fis_from_json(json::parse(R"({"employees": ["a"], "tasks": [{"id": "t"}]})")), ReductionError);
}

TEST(Reduction, ObjectiveConstantOverFeasibleSolutions) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto fis = fuzz::random_fis(seed);
    const auto inst = fis_to_fmp(fis);
    const auto r = brute_force_solve(inst, ObjectiveKind::MinChecksMaxRft);
    if (r.feasible) { EXPECT_EQ(r.value, 0.0); }
  }
}
