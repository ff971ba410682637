#include <gtest/gtest.h>

#include "fmp.hpp"
#include "support/builders.hpp"

using namespace fmp;

namespace {

Instance flyer(double rft = 1000, int T = 10) {
  Instance inst;
  inst.params = build::params(T, 6, 2, 0, 60, 1000);
  inst.fleet.push_back(build::aircraft("a", rft, 60));
  return inst;
}

}  // namespace

TEST(DeriveUsage, FreeAircraftKeepsHours) {
  auto inst = flyer(700);
  Solution s = Solution::blank(inst);
  derive_usage(inst, s);
  for (int t = 0; t < 10; ++t) {
    EXPECT_EQ(s.u[0][t], 0.0);
    EXPECT_EQ(s.rft[0][t], 700.0);
    EXPECT_EQ(s.rct[0][t], 59 - t);
  }
}

TEST(DeriveUsage, MissionConsumesHours) {
  auto inst = flyer();
  inst.missions.push_back(build::mission("m", 1, 4, 50));
  Solution s = Solution::blank(inst);
  for (int t = 1; t <= 4; ++t) s.at(0, t) = Cell::on_mission(0);
  derive_usage(inst, s);
  EXPECT_EQ(std::vector<double>(s.rft[0].begin(), s.rft[0].begin() + 4), (std::vector<double>{950, 900, 850, 800}));
  EXPECT_EQ(s.u[0][0], 50.0);
  EXPECT_EQ(s.u[0][4], 0.0);
}

TEST(DeriveUsage, CheckPinsRemainingHours) {
  auto inst = flyer(300);
  Solution s = Solution::blank(inst);
  s.place_check(0, 5, 6);
  derive_usage(inst, s);
  for (int t = 5; t <= 10; ++t) {
    EXPECT_EQ(s.rft[0][t - 1], 1000.0);
    EXPECT_EQ(s.rct[0][t - 1], 60);
  }
  EXPECT_EQ(s.rft[0][3], 300.0);
}

TEST(DeriveUsage, DefaultUsageOutsideChecks) {
  auto inst = flyer(100, 4);
  inst.params.default_usage = 20;
  inst.params.check_duration = 2;
  Solution s = Solution::blank(inst);
  s.place_check(0, 3, 2);
  derive_usage(inst, s);
  EXPECT_EQ(s.u[0], (std::vector<double>{20, 20, 0, 0}));
  EXPECT_EQ(s.rft[0], (std::vector<double>{80, 60, 1000, 1000}));
}

TEST(CheckSolution, UncoveredMission) {
  auto inst = flyer();
  inst.fleet.push_back(build::aircraft("b", 1000, 60));
  inst.missions.push_back(build::mission("m", 3, 6, 10, 2));
  Solution s = Solution::blank(inst);
  derive_usage(inst, s);
  const auto rep = check_solution(inst, s);
  EXPECT_EQ(rep.size(), 4u);
  EXPECT_EQ(rep.count(Family::MissionReq), 4u);
  for (const auto& v : rep.entries) {
    EXPECT_EQ(v.mission, 0);
    EXPECT_EQ(v.magnitude, 2.0);
  }
}

TEST(CheckSolution, CapacityMagnitude) {
  Instance inst;
  inst.params = build::params(10, 6, 2, 0, 60, 1000);
  for (int i = 0; i < 3; ++i) inst.fleet.push_back(build::aircraft("a" + std::to_string(i), 1000, 60));
  Solution s = Solution::blank(inst);
  s.place_check(0, 2, 6);
  s.place_check(1, 3, 6);
  s.place_check(2, 4, 6);
  derive_usage(inst, s);
  const auto rep = check_solution(inst, s);
  ASSERT_GT(rep.count(Family::Capacity), 0u);
  for (const auto& v : rep.entries)
    if (v.family == Family::Capacity) {
      EXPECT_EQ(v.magnitude, 1.0);
      EXPECT_GE(v.period, 4);
      EXPECT_LE(v.period, 7);
    }
  EXPECT_EQ(rep.count(Family::Capacity), 4u);
}

TEST(CheckSolution, ChecksTooCloseViolateCalendar) {
  Instance inst;
  inst.params = build::params(40, 6, 1, 30, 60, 1000);
  inst.fleet.push_back(build::aircraft("a", 1000, 60));
  Solution s = Solution::blank(inst);
  s.place_check(0, 1, 6);
  s.place_check(0, 21, 6);
  derive_usage(inst, s);
  const auto rep = check_solution(inst, s);
  EXPECT_GE(rep.count(Family::Calendar), 1u);
  EXPECT_EQ(rep.size(), rep.count(Family::Calendar));
}

TEST(CheckSolution, CalendarForcesInitialCheck) {
  Instance inst;
  inst.params = build::params(8, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 5));
  Solution s = Solution::blank(inst);
  derive_usage(inst, s);
  EXPECT_EQ(check_solution(inst, s).count(Family::Calendar), 1u);
  s.place_check(0, 4, 2);
  derive_usage(inst, s);
  EXPECT_TRUE(check_solution(inst, s).feasible());
}

TEST(CheckSolution, NegativeHoursAlwaysReported) {
  auto inst = flyer(60, 4);
  inst.missions.push_back(build::mission("m", 1, 4, 50));
  Solution s = Solution::blank(inst);
  s.at(0, 1) = Cell::on_mission(0);
  s.at(0, 2) = Cell::on_mission(0);
  derive_usage(inst, s);
  EXPECT_LT(s.rft[0][1], 0.0);
  EXPECT_GE(check_solution(inst, s).count(Family::Rft), 1u);
}

TEST(CheckSolution, StateAndMinAssign) {
  auto inst = flyer(1000, 6);
  inst.missions.push_back(build::mission("m", 1, 6, 10, 1, 3));
  inst.missions.push_back(build::mission("n", 2, 3, 10, 1, 1));
  inst.missions.back().standard = "S9";
  Solution s = Solution::blank(inst);
  for (int t = 1; t <= 6; ++t) s.at(0, t) = Cell::on_mission(0);
  s.at(0, 3) = Cell::free();  // run 1..2 shorter than 3
  derive_usage(inst, s);
  auto rep = check_solution(inst, s);
  EXPECT_GE(rep.count(Family::MinAssign), 1u);

  s.at(0, 3) = Cell::on_mission(1);  // ineligible
  derive_usage(inst, s);
  EXPECT_GE(check_solution(inst, s).count(Family::State), 1u);

  Solution body = Solution::blank(inst);
  body.at(0, 4) = Cell::check_body();  // orphan body
  derive_usage(inst, body);
  EXPECT_GE(check_solution(inst, body).count(Family::State), 1u);

  Solution shape(2, 6);
  EXPECT_EQ(check_solution(inst, shape).count(Family::State), 1u);
}

TEST(CheckSolution, InitialFix) {
  Instance inst;
  inst.params = build::params(6, 3, 1, 0, 10, 100);
  inst.params.in_maintenance = {1, 1, 0, 0, 0, 0};
  inst.fleet.push_back(build::aircraft("a", 100, 12));
  inst.fleet[0].in_maint_remaining = 2;
  inst.missions.push_back(build::mission("m", 1, 6, 10));
  Solution s = Solution::blank(inst);
  for (int t = 3; t <= 6; ++t) s.at(0, t) = Cell::on_mission(0);
  derive_usage(inst, s);
  const auto ok = check_solution(inst, s);
  EXPECT_EQ(ok.count(Family::InitialFix), 0u);
  EXPECT_EQ(ok.count(Family::MissionReq), 2u);
  s.at(0, 2) = Cell::on_mission(0);
  derive_usage(inst, s);
  EXPECT_GE(check_solution(inst, s).count(Family::InitialFix), 1u);
}

TEST(CheckSolution, ClusterFloors) {
  Instance inst;
  inst.params = build::params(4, 2, 2, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 10));
  inst.fleet.push_back(build::aircraft("b", 40, 10));
  inst.clusters.push_back(build::whole_fleet(inst, 0, 150));
  Solution s = Solution::blank(inst);
  derive_usage(inst, s);
  auto rep = check_solution(inst, s);
  EXPECT_EQ(rep.count(Family::ClusterSust), 4u);
  EXPECT_DOUBLE_EQ(rep.entries[0].magnitude, 10.0);
  s.place_check(1, 1, 2);
  derive_usage(inst, s);
  rep = check_solution(inst, s);
  EXPECT_EQ(rep.count(Family::ClusterServ), 2u);
  EXPECT_EQ(rep.count(Family::ClusterSust), 0u);
}

TEST(Objective, Kinds) {
  Instance inst;
  inst.params = build::params(2, 1, 3, 0, 10, 1000);
  for (int i = 0; i < 3; ++i) inst.fleet.push_back(build::aircraft("a" + std::to_string(i), 1000, 10));
  Solution s = Solution::blank(inst);
  derive_usage(inst, s);
  EXPECT_EQ(objective(inst, s, ObjectiveKind::MinChecks), 0.0);
  EXPECT_EQ(objective(inst, s, ObjectiveKind::MinChecksMaxRft), -3000.0);

  inst.fleet[0].rft_init = 0;
  inst.fleet[1].rft_init = 400;
  inst.fleet[2].rft_init = 400;
  inst.fleet.pop_back();
  inst.fleet.push_back(build::aircraft("x", 1000, 10));
  Solution t = Solution::blank(inst);
  t.place_check(0, 2, 1);
  t.place_check(2, 2, 1);
  derive_usage(inst, t);
  // end rft 1000 + 400 + 1000 = 2400; objective 2 * 1000 - 2400
  EXPECT_EQ(objective(inst, t, ObjectiveKind::MinChecksMaxRft), -400.0);
  t.rft[1][1] = 800 - 1000;  // end-sum 1800 with two checks
  EXPECT_EQ(objective(inst, t, ObjectiveKind::MinChecksMaxRft), 200.0);
  EXPECT_EQ(objective(inst, t, ObjectiveKind::MinChecks), 2.0);
}

TEST(BruteForce, ZeroDemandNeedsNoCheck) {
  Instance inst;
  inst.params = build::params(6, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 10));
  const auto r = brute_force_solve(inst, ObjectiveKind::MinChecks);
  ASSERT_TRUE(r.feasible);
  EXPECT_EQ(r.value, 0.0);
}

TEST(BruteForce, ExpiringCalendarForcesCheck) {
  Instance inst;
  inst.params = build::params(8, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 10));
  inst.fleet.push_back(build::aircraft("b", 100, 6));
  const auto r = brute_force_solve(inst, ObjectiveKind::MinChecks);
  ASSERT_TRUE(r.feasible);
  EXPECT_GE(r.value, 1.0);
  EXPECT_TRUE(check_solution(inst, r.solution).feasible());
}

TEST(BruteForce, SizeGuard) {
  Instance inst;
  inst.params = build::params(9);
  inst.fleet.push_back(build::aircraft("a", 100, 10));
  EXPECT_THROW(brute_force_solve(inst, ObjectiveKind::MinChecks), SizeGuardError);
  EXPECT_NO_THROW(brute_force_solve(inst, ObjectiveKind::MinChecks, {3, 9}));
}
