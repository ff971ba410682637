#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fmp.hpp"
#include "support/builders.hpp"
#include "support/fuzz.hpp"

using namespace fmp;

namespace {

SaParams quick(std::uint64_t seed = 1, long iters = 20000) {
  SaParams p;
  p.time_limit = 30;
  p.iter_limit = iters;
  p.seed = seed;
  return p;
}

// No orphan check bodies, no truncated checks before the horizon end.
bool structurally_sound(const Instance& inst, const Solution& s) {
  const int M = inst.params.check_duration;
  const int T = inst.num_periods();
  for (int i = 0; i < s.num_aircraft(); ++i) {
    const int nm = inst.fleet[i].in_maint_remaining;
    for (int t = 1; t <= T; ++t) {
      const auto c = s.at(i, t);
      if (t <= nm && c != Cell::check_body()) return false;
      if (c.kind == CellKind::CheckStart)
        for (int q = t + 1; q < t + M && q <= T; ++q)
          if (s.at(i, q) != Cell::check_body()) return false;
      if (c.kind == CellKind::CheckBody && t > nm) {
        bool covered = false;
        for (int q = std::max(1, t - M + 1); q < t; ++q) covered |= s.at(i, q).kind == CellKind::CheckStart;
        if (!covered) return false;
      }
    }
  }
  return true;
}

// Two exhausted calendars, one hangar slot, overlapping windows.
Instance clash() {
  Instance inst;
  inst.params = build::params(6, 3, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 1));
  inst.fleet.push_back(build::aircraft("b", 100, 1));
  return inst;
}

}  // namespace

TEST(Accept, Boundaries) {
  Rng rng(1);
  EXPECT_TRUE(accept(-5, 1.0, rng));
  EXPECT_TRUE(accept(0, 1.0, rng));
  EXPECT_TRUE(accept(0, 0.0, rng));
  EXPECT_FALSE(accept(1, 0.0, rng));
}

TEST(Accept, MonteCarloMatchesExponential) {
  Rng rng(77);
  double prev = 1.0;
  for (double temp : {4.0, 2.0, 1.0, 0.5, 0.25}) {
    int hits = 0;
    for (int k = 0; k < 10000; ++k) hits += accept(1.0, temp, rng);
    const double rate = hits / 10000.0;
    EXPECT_NEAR(rate, std::exp(-1.0 / temp), 0.02) << temp;
    EXPECT_LT(rate, prev);
    prev = rate;
  }
}

TEST(Params, Validation) {
  SaParams p;
  EXPECT_NO_THROW(validate_params(p));
  p.cooling_rate = 1.0;
  EXPECT_THROW(validate_params(p), DomainError);
  p = {};
  p.time_limit = 0;
  EXPECT_THROW(validate_params(p), DomainError);
  p = {};
  p.iter_limit = 0;
  EXPECT_THROW(validate_params(p), DomainError);
  p = {};
  p.release_fraction = 2;
  EXPECT_THROW(validate_params(p), DomainError);
}

TEST(Calibration, HitsTargetAcceptance) {
  const std::vector<double> deltas{-1, 0.5, 1, 2, 4, 8, 0.1, 3};
  const double temp = calibrate_temperature(deltas, 0.8);
  double rate = 0;
  for (double d : deltas) rate += d <= 0 ? 1.0 : std::exp(-d / temp);
  EXPECT_NEAR(rate / deltas.size(), 0.8, 1e-6);
  EXPECT_EQ(calibrate_temperature({}, 0.8), 1.0);
}

TEST(Penalty, FeasibleIsScaledObjective) {
  Instance inst;
  inst.params = build::params(6, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 4));
  Solution s = Solution::blank(inst);
  s.place_check(0, 3, 2);
  derive_usage(inst, s);
  ASSERT_TRUE(check_solution(inst, s).feasible());
  const auto w = default_weights(inst);
  EXPECT_DOUBLE_EQ(penalty(inst, s), w.objective_scale * 1.0);
  EXPECT_DOUBLE_EQ(penalty(inst, s, ObjectiveKind::MinChecksMaxRft),
                   scaled_objective(inst, objective(inst, s, ObjectiveKind::MinChecksMaxRft), ObjectiveKind::MinChecksMaxRft, w));
  EXPECT_EQ(penalty(inst, s), penalty(inst, s));
}

TEST(Penalty, CapacityViolationIncreases) {
  Instance inst;
  inst.params = build::params(6, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 10));
  inst.fleet.push_back(build::aircraft("b", 100, 10));
  Solution s = Solution::blank(inst);
  s.place_check(0, 3, 2);
  derive_usage(inst, s);
  const double before = penalty(inst, s);
  s.place_check(1, 3, 2);
  derive_usage(inst, s);
  EXPECT_EQ(check_solution(inst, s).count(Family::Capacity), 2u);
  EXPECT_GT(penalty(inst, s), before);
}

TEST(Candidates, MissionDemandTargeted) {
  Instance inst;
  inst.params = build::params(4, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 10));
  inst.missions.push_back(build::mission("m", 2, 2, 10));
  Solution s = Solution::blank(inst);
  derive_usage(inst, s);
  const auto rep = check_solution(inst, s);
  ASSERT_EQ(rep.size(), 1u);
  const auto moves = candidate_moves(rep, inst, s);
  ASSERT_GE(moves.size(), 1u);
  EXPECT_EQ(moves[0].kind, MoveKind::CoverDemand);
  EXPECT_EQ(moves[0].mission, 0);
  EXPECT_EQ(moves[0].period, 2);
}

TEST(Candidates, FeasibleYieldsObjectiveMovesOnly) {
  Instance inst;
  inst.params = build::params(6, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 4));
  Solution s = Solution::blank(inst);
  s.place_check(0, 3, 2);
  derive_usage(inst, s);
  const auto moves = candidate_moves(check_solution(inst, s), inst, s);
  ASSERT_EQ(moves.size(), 2u);
  for (const auto& m : moves) {
    EXPECT_TRUE(m.kind == MoveKind::DropCheck || m.kind == MoveKind::DelayCheck);
    EXPECT_EQ(m.aircraft, 0);
    EXPECT_EQ(m.period, 3);
  }
  Solution none = Solution::blank(inst);
  derive_usage(inst, none);
  const auto rep = check_solution(inst, none);
  for (const auto& m : candidate_moves(rep, inst, none)) EXPECT_EQ(m.kind, MoveKind::ReplanChecks);
}

TEST(Candidates, EveryMoveHasATarget) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = fuzz::tiny_instance(seed);
    Rng rng(seed);
    const auto s = fuzz::random_grid(inst, rng);
    const auto rep = check_solution(inst, s);
    const auto moves = candidate_moves(rep, inst, s);
    if (!rep.feasible()) { EXPECT_EQ(moves.size(), rep.size()); }
    for (const auto& m : moves) {
      if (m.kind == MoveKind::CoverDemand) {
        EXPECT_GE(m.mission, 0);
        EXPECT_TRUE(inst.missions[m.mission].window.contains(m.period));
      }
      if (m.kind == MoveKind::BoostCluster) { EXPECT_GE(m.cluster, 0); }
      if (m.kind == MoveKind::ReplanChecks || m.kind == MoveKind::RestoreHours) {
        EXPECT_GE(m.aircraft, 0) << move_name(m.kind);
      }
    }
  }
}

TEST(Construct, ExhaustedCalendarGetsCheckInWindow) {
  Instance inst;
  inst.params = build::params(8, 2, 1, 2, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 5));
  Annealer ann(inst, quick());
  ann.construct();
  const auto& s = ann.solution();
  const auto w = initial_window_sets(inst.fleet[0], inst.params);
  int starts = 0;
  for (int t = 1; t <= 8; ++t)
    if (s.at(0, t).kind == CellKind::CheckStart) {
      ++starts;
      EXPECT_TRUE(w.must_check.contains(t)) << t;
    }
  EXPECT_EQ(starts, 1);
  EXPECT_TRUE(ann.current_feasible());
}

TEST(SaSolve, ZeroMissionsFeasibleImmediately) {
  Instance inst;
  inst.params = build::params(10, 2, 1, 0, 20, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 20));
  inst.fleet.push_back(build::aircraft("b", 50, 15));
  const auto r = sa_solve(inst, quick());
  EXPECT_TRUE(r.feasible);
  EXPECT_EQ(r.trace.outcome, SearchOutcome::Feasible);
  EXPECT_EQ(r.trace.first_feasible, 0);
  EXPECT_EQ(r.trace.iterations, 0);
}

TEST(SaSolve, FeasibleOutcomeAlwaysValidates) {
  int solved = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = fuzz::tiny_instance(2000 + seed);
    const auto r = sa_solve(inst, quick(seed, 5000));
    EXPECT_EQ(r.feasible, check_solution(inst, r.solution).feasible());
    if (r.trace.outcome == SearchOutcome::Feasible) {
      EXPECT_TRUE(r.feasible);
      ++solved;
    }
    EXPECT_TRUE(structurally_sound(inst, r.solution)) << seed;
  }
  EXPECT_GT(solved, 0);
}

TEST(SaSolve, TraceNonIncreasing) {
  GenConfig cfg;
  cfg.seed = 21;
  const auto inst = generate_instance(cfg);
  const auto r = sa_solve(inst, quick(3, 3000));
  ASSERT_FALSE(r.trace.best_penalty.empty());
  for (std::size_t k = 1; k < r.trace.best_penalty.size(); ++k) {
    EXPECT_LE(r.trace.best_penalty[k].penalty, r.trace.best_penalty[k - 1].penalty);
    EXPECT_GT(r.trace.best_penalty[k].iteration, r.trace.best_penalty[k - 1].iteration);
  }
  EXPECT_DOUBLE_EQ(r.trace.best_penalty.back().penalty, r.penalty);
  EXPECT_NEAR(r.penalty, penalty(inst, r.solution), 1e-9);
}

TEST(SaSolve, Deterministic) {
  GenConfig cfg;
  cfg.seed = 5;
  const auto inst = generate_instance(cfg);
  auto p = quick(9, 2000);
  p.stop_on_feasible = false;
  const auto a = sa_solve(inst, p);
  const auto b = sa_solve(inst, p);
  EXPECT_EQ(a.trace.iterations, b.trace.iterations);
  EXPECT_EQ(a.trace.accepted, b.trace.accepted);
  ASSERT_EQ(a.trace.best_penalty.size(), b.trace.best_penalty.size());
  for (std::size_t k = 0; k < a.trace.best_penalty.size(); ++k) {
    EXPECT_EQ(a.trace.best_penalty[k].iteration, b.trace.best_penalty[k].iteration);
    EXPECT_EQ(a.trace.best_penalty[k].penalty, b.trace.best_penalty[k].penalty);
  }
  EXPECT_TRUE(a.solution.same_states(b.solution));
}

TEST(SaSolve, IterLimitOutcome) {
  const auto inst = clash();
  const auto r = sa_solve(inst, quick(1, 500));
  EXPECT_FALSE(r.feasible);
  EXPECT_EQ(r.trace.outcome, SearchOutcome::IterLimit);
  EXPECT_EQ(r.trace.iterations, 500);
}

TEST(SaSolve, TimeLimitOutcome) {
  const auto inst = clash();
  auto p = quick(1, 1'000'000'000);
  p.time_limit = 0.2;
  const auto r = sa_solve(inst, p);
  EXPECT_EQ(r.trace.outcome, SearchOutcome::TimeLimit);
  EXPECT_LT(r.trace.wall_time, 2.0);
}

TEST(SaSolve, KeepGoingNeverWorsensObjective) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = fuzz::tiny_instance(3000 + seed);
    auto p = quick(seed, 3000);
    const auto first = sa_solve(inst, p);
    if (!first.feasible) continue;
    p.stop_on_feasible = false;
    const auto more = sa_solve(inst, p);
    ASSERT_TRUE(more.feasible);
    EXPECT_LE(objective(inst, more.solution, ObjectiveKind::MinChecks),
              objective(inst, first.solution, ObjectiveKind::MinChecks));
  }
}

TEST(SaSolve, RestartsPickLowestPenalty) {
  const auto inst = clash();
  const auto r = sa_solve_restarts(inst, quick(4, 500), 3, 2);
  EXPECT_NEAR(r.penalty, penalty(inst, r.solution), 1e-9);
  const auto again = sa_solve_restarts(inst, quick(4, 500), 3, 1);
  EXPECT_EQ(r.penalty, again.penalty);
}

TEST(WarmStart, FeasibleExportIngestsBack) {
  Instance inst;
  inst.params = build::params(6, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 4));
  inst.missions.push_back(build::mission("m", 1, 2, 10));
  const auto r = sa_solve(inst, quick());
  ASSERT_TRUE(r.feasible);
  std::ostringstream out;
  export_warm_start(out, inst, r.solution, ObjectiveKind::MinChecks);
  std::istringstream in(out.str());
  const auto model = mip::build_fixed_model(inst, ObjectiveKind::MinChecks);
  const auto vals = mip::read_values(in);
  for (const auto& [name, v] : vals) EXPECT_NE(v, 0.0) << name;
  const auto back = mip::extract_solution(model, vals, inst);
  EXPECT_TRUE(back.same_states(r.solution));
  std::vector<double> x(model.num_vars(), 0.0);
  for (const auto& [name, v] : vals) x[model.column(name)] = v;
  EXPECT_TRUE(check_point(model, x).empty());
}

TEST(WarmStart, InfeasibleNeedsFlag) {
  Instance inst;
  inst.params = build::params(4, 2, 1, 0, 10, 100);
  inst.fleet.push_back(build::aircraft("a", 100, 10));
  inst.missions.push_back(build::mission("m", 1, 2, 10));
  const auto s = Solution::blank(inst);
  std::ostringstream out;
  EXPECT_THROW(export_warm_start(out, inst, s, ObjectiveKind::MinChecks), DomainError);
  EXPECT_NO_THROW(export_warm_start(out, inst, s, ObjectiveKind::MinChecks, true));
  EXPECT_EQ(out.str().rfind("# nearly feasible", 0), 0u);
}
