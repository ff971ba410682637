#include <gtest/gtest.h>

#include <map>

#include "fmp.hpp"

using namespace fmp;

TEST(Generator, BaseScenarioParameters) {
  GenConfig cfg;
  const auto inst = generate_instance(cfg);
  EXPECT_EQ(inst.num_periods(), 60);
  EXPECT_EQ(inst.num_aircraft(), 15);
  EXPECT_EQ(inst.params.capacity, 3);
  EXPECT_EQ(inst.params.calendar_max, 60);
  EXPECT_EQ(inst.params.calendar_min, 30);
  EXPECT_EQ(inst.params.check_duration, 6);
  EXPECT_DOUBLE_EQ(inst.params.flight_max, 1000);
  EXPECT_DOUBLE_EQ(inst.params.default_usage, 0);
  EXPECT_NO_THROW(validate_instance(inst));
}

TEST(Generator, NoParallelMissions) {
  GenConfig cfg;
  cfg.parallel_missions = 0;
  const auto inst = generate_instance(cfg);
  EXPECT_TRUE(inst.missions.empty());
  EXPECT_TRUE(inst.clusters.empty());
  EXPECT_EQ(inst.num_aircraft(), 15);
}

TEST(Generator, SameSeedSameBytes) {
  GenConfig cfg;
  cfg.seed = 1234;
  EXPECT_EQ(instance_to_json(generate_instance(cfg)).dump(), instance_to_json(generate_instance(cfg)).dump());
  auto other = cfg;
  other.seed = 1235;
  EXPECT_NE(instance_to_json(generate_instance(cfg)).dump(), instance_to_json(generate_instance(other)).dump());
}

TEST(Generator, RollingMissionsPartitionHorizon) {
  GenConfig cfg;
  cfg.parallel_missions = 1;
  Rng rng(5);
  const auto missions = generate_missions(cfg, rng);
  int next = 1;
  for (const auto& m : missions) {
    EXPECT_EQ(m.window.first, next);
    EXPECT_GE(m.window.size(), 1);
    if (m.window.last < 60) {
      EXPECT_GE(m.window.size(), 6);
      EXPECT_LE(m.window.size(), 12);
    }
    EXPECT_TRUE(m.min_assign == 2 || m.min_assign == 3 || m.min_assign == 6 || m.min_assign == m.window.size());
    EXPECT_GE(m.required, 2);
    EXPECT_LE(m.required, 5);
    EXPECT_GE(m.hours, 30);
    EXPECT_LT(m.hours, 80);
    EXPECT_EQ(m.hours, std::floor(m.hours));
    next = m.window.last + 1;
  }
  EXPECT_EQ(next, 61);
}

TEST(Generator, ShortHorizonTruncatesSingleMission) {
  GenConfig cfg;
  cfg.num_periods = 5;
  Rng rng(9);
  const auto missions = generate_missions(cfg, rng);
  ASSERT_EQ(missions.size(), 1u);
  EXPECT_EQ(missions[0].window, (PeriodRange{1, 5}));
  EXPECT_LE(missions[0].min_assign, 5);
}

TEST(Generator, OneTypeFillsFleet) {
  GenConfig cfg;
  Rng rng(1);
  std::vector<Mission> missions(1);
  missions[0].id = "M0";
  missions[0].window = {1, 60};
  missions[0].required = 5;
  missions[0].type = "T0";
  const auto fleet = generate_fleet(cfg, missions, rng);
  ASSERT_EQ(fleet.size(), 15u);
  for (const auto& a : fleet) EXPECT_EQ(a.type, "T0");
}

TEST(Generator, ForcedTypeMinimums) {
  GenConfig cfg;
  cfg.num_types = 2;
  cfg.fleet_size = 5;
  cfg.scale_fleet = false;
  std::vector<Mission> missions(2);
  missions[0].window = {1, 60};
  missions[0].required = 3;
  missions[0].type = "T0";
  missions[1].window = {1, 60};
  missions[1].required = 2;
  missions[1].type = "T1";
  Rng rng(2);
  const auto fleet = generate_fleet(cfg, missions, rng);
  std::map<std::string, int> count;
  for (const auto& a : fleet) ++count[a.type];
  EXPECT_EQ(count["T0"], 3);
  EXPECT_EQ(count["T1"], 2);
  cfg.fleet_size = 4;
  EXPECT_THROW(generate_fleet(cfg, missions, rng), GenerationError);
}

TEST(Generator, StandardsHeldTwiceOver) {
  GenConfig cfg;
  std::vector<Mission> missions(1);
  missions[0].window = {1, 60};
  missions[0].required = 2;
  missions[0].type = "T0";
  missions[0].standard = "S0";
  Rng rng(3);
  const auto fleet = generate_fleet(cfg, missions, rng);
  int holders = 0;
  for (const auto& a : fleet) holders += a.standards.count("S0");
  EXPECT_GE(holders, 4);
}

TEST(Generator, InitialStateRules) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    const auto inst = generate_instance(cfg);
    int in_maint = 0;
    std::map<std::string, int> pre;
    for (const auto& a : inst.fleet) {
      if (a.in_maint_remaining > 0) {
        ++in_maint;
        EXPECT_LE(a.in_maint_remaining, cfg.check_duration - 1);
        EXPECT_EQ(a.rct_init, cfg.calendar_max + a.in_maint_remaining);
        EXPECT_DOUBLE_EQ(a.rft_init, cfg.flight_max);
        EXPECT_FALSE(a.preassigned);
        continue;
      }
      EXPECT_GE(a.rct_init, 0);
      EXPECT_LE(a.rct_init, cfg.calendar_max);
      const double ideal = a.rct_init * cfg.flight_max / cfg.calendar_max;
      EXPECT_LE(std::abs(a.rft_init - std::clamp(ideal, 0.0, cfg.flight_max)), 3 * cfg.flight_max / cfg.calendar_max + 1e-9);
      if (a.preassigned) ++pre[a.preassigned->mission];
    }
    EXPECT_LE(in_maint, inst.params.capacity);
    for (const auto& m : inst.missions)
      if (m.window.contains(1)) { EXPECT_EQ(pre[m.id], m.required) << m.id; }
    for (int t = 1; t <= inst.num_periods(); ++t) {
      int n = 0;
      for (const auto& a : inst.fleet) n += a.in_maint_remaining >= t;
      EXPECT_EQ(inst.params.known_in_maintenance(t), n);
    }
  }
}

TEST(Generator, ClusterFloors) {
  GenConfig cfg;
  std::vector<Mission> missions(1);
  missions[0].type = "T0";
  missions[0].window = {1, 60};
  std::vector<Aircraft> fleet(15);
  for (int i = 0; i < 15; ++i) {
    fleet[i].id = "A" + std::to_string(i);
    fleet[i].type = "T0";
  }
  fleet[0].in_maint_remaining = 2;
  auto clusters = derive_clusters(cfg, fleet, missions);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].members.size(), 15u);
  EXPECT_DOUBLE_EQ(clusters[0].sustain_floor[0], 7500);
  EXPECT_EQ(clusters[0].known_in_maint[1], 1);
  EXPECT_EQ(clusters[0].known_in_maint[2], 0);

  fleet.resize(10);
  cfg.serviceable_pct = 0.1;
  cfg.serviceable_min = 2;
  clusters = derive_clusters(cfg, fleet, missions);
  EXPECT_EQ(clusters[0].maint_cap[0], 8);
}

TEST(Generator, ClusterWithoutMembersFails) {
  GenConfig cfg;
  std::vector<Mission> missions(1);
  missions[0].type = "T9";
  std::vector<Aircraft> fleet(1);
  fleet[0].type = "T0";
  EXPECT_THROW(derive_clusters(cfg, fleet, missions), GenerationError);
}

TEST(Generator, RejectsBadConfig) {
  GenConfig cfg;
  cfg.window = 60;
  EXPECT_THROW(generate_instance(cfg), ConfigError);
  cfg = {};
  cfg.capacity_pct = 0;
  EXPECT_THROW(generate_instance(cfg), ConfigError);
  cfg = {};
  cfg.sustain_pct = 1.5;
  EXPECT_THROW(generate_instance(cfg), ConfigError);
}

TEST(Grid, PairedSeeds) {
  ScenarioGrid g;
  g.overrides.push_back({"calendar_max", 80});
  g.instances_per_scenario = 50;
  const auto entries = expand_grid(g);
  ASSERT_EQ(entries.size(), 100u);
  for (int k = 0; k < 50; ++k) {
    EXPECT_EQ(entries[k].scenario, "base");
    EXPECT_EQ(entries[50 + k].scenario, "calendar_max=80");
    EXPECT_EQ(entries[k].config.seed, entries[50 + k].config.seed);
    EXPECT_EQ(entries[50 + k].config.calendar_max, 80);
  }
  EXPECT_NE(entries[0].config.seed, entries[1].config.seed);
}

TEST(Grid, EmptyOverridesAndRepeats) {
  ScenarioGrid g;
  EXPECT_EQ(expand_grid(g).size(), 1u);
  g.overrides = {{"flight_max", 900}, {"flight_max", 1100}};
  const auto e = expand_grid(g);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[1].config.flight_max, 900);
  EXPECT_EQ(e[2].config.flight_max, 1100);
}

TEST(Grid, UnknownParameter) {
  ScenarioGrid g;
  g.overrides = {{"bogus", 1}};
  EXPECT_THROW(expand_grid(g), ConfigError);
  EXPECT_THROW(grid_from_json(json::parse(R"({"base": {}, "overrides": [["bogus", 1]]})")), ConfigError);
}

TEST(Grid, JsonRoundTrip) {
  ScenarioGrid g;
  g.base.seed = 99;
  g.base.num_periods = 40;
  g.overrides = {{"default_usage", 20}, {"check_duration", 4}};
  g.instances_per_scenario = 3;
  const auto back = grid_from_json(grid_to_json(g));
  EXPECT_EQ(grid_to_json(back), grid_to_json(g));
  const auto bare = grid_from_json(json::parse(R"({"num_periods": 12, "seed": 4})"));
  EXPECT_EQ(bare.base.num_periods, 12);
  EXPECT_EQ(bare.base.seed, 4u);
  EXPECT_THROW(grid_from_json(json::parse(R"({"version": 2, "base": {}})")), ConfigError);
}
