#pragma once

// Seeded instance generation and scenario grids.
//
// Random draws come from three named sub-streams of the instance seed
// ("missions", "fleet", "initial"), so changing how one part is generated
// never shifts the draws of the others.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "rng.hpp"

namespace fmp {

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenConfig {
  int parallel_missions = 1;       // |J^P|
  int fleet_size = 15;             // |I| per parallel mission slot (see scale_fleet)
  bool scale_fleet = true;         // |I| = fleet_size * max(1, |J^P|)
  int num_periods = 60;
  double capacity_pct = 0.15;      // C_perc
  int calendar_max = 60;           // E_M
  int window = 30;                 // E_s; E_m = E_M - E_s
  double flight_max = 1000;        // H_M
  int check_duration = 6;          // M
  double default_usage = 0;        // U_min
  int serviceable_min = 2;         // AN^K
  double serviceable_pct = 0.1;    // AP^K
  double sustain_pct = 0.5;        // HP^K
  ObjectiveKind objective_kind = ObjectiveKind::MinChecks;
  std::uint64_t seed = 42;
  int num_types = 1;
  int num_standards = 1;
  double standard_prob = 0.1;
  int min_duration = 6;
  int max_duration = 12;
  int min_required = 2;
  int max_required = 5;

  int total_fleet() const { return scale_fleet ? fleet_size * std::max(1, parallel_missions) : fleet_size; }
  int calendar_min() const { return calendar_max - window; }
  int capacity() const {
    return static_cast<int>(std::ceil(capacity_pct * total_fleet() - 1e-9));
  }

  void check() const {
    auto bad = [](const std::string& w) { throw ConfigError(w); };
    if (parallel_missions < 0) bad("parallel_missions < 0");
    if (fleet_size < 0) bad("fleet_size < 0");
    if (num_periods < 1) bad("num_periods < 1");
    if (!(capacity_pct > 0 && capacity_pct <= 1)) bad("capacity_pct outside (0, 1]");
    if (window < 0 || window >= calendar_max) bad("need 0 <= window < calendar_max");
    if (flight_max < 0 || default_usage < 0) bad("negative flight hours");
    if (check_duration < 0) bad("check_duration < 0");
    if (!(sustain_pct >= 0 && sustain_pct <= 1)) bad("sustain_pct outside [0, 1]");
    if (serviceable_pct < 0 || serviceable_min < 0) bad("negative serviceability floor");
    if (num_types < 1 || num_standards < 1) bad("need at least one type and one standard");
    if (min_duration < 1 || max_duration < min_duration) bad("bad mission duration range");
    if (min_required < 1 || max_required < min_required) bad("bad mission requirement range");
  }
};

inline void to_json(nlohmann::json& j, const GenConfig& c) {
  j = nlohmann::json{
      {"parallel_missions", c.parallel_missions}, {"fleet_size", c.fleet_size},
      {"scale_fleet", c.scale_fleet},             {"num_periods", c.num_periods},
      {"capacity_pct", c.capacity_pct},           {"calendar_max", c.calendar_max},
      {"window", c.window},                       {"flight_max", c.flight_max},
      {"check_duration", c.check_duration},       {"default_usage", c.default_usage},
      {"serviceable_min", c.serviceable_min},     {"serviceable_pct", c.serviceable_pct},
      {"sustain_pct", c.sustain_pct},
      {"objective_kind", c.objective_kind == ObjectiveKind::MinChecks ? "checks" : "checks+rft"},
      {"seed", c.seed},                           {"num_types", c.num_types},
      {"num_standards", c.num_standards},         {"standard_prob", c.standard_prob},
      {"min_duration", c.min_duration},           {"max_duration", c.max_duration},
      {"min_required", c.min_required},           {"max_required", c.max_required},
  };
}

/// Sets one GenConfig field by name from a JSON value.
inline void set_parameter(GenConfig& c, const std::string& name, const nlohmann::json& v) {
  try {
    if (name == "parallel_missions") c.parallel_missions = v.get<int>();
    else if (name == "fleet_size") c.fleet_size = v.get<int>();
    else if (name == "scale_fleet") c.scale_fleet = v.get<bool>();
    else if (name == "num_periods") c.num_periods = v.get<int>();
    else if (name == "capacity_pct") c.capacity_pct = v.get<double>();
    else if (name == "calendar_max") c.calendar_max = v.get<int>();
    else if (name == "window") c.window = v.get<int>();
    else if (name == "flight_max") c.flight_max = v.get<double>();
    else if (name == "check_duration") c.check_duration = v.get<int>();
    else if (name == "default_usage") c.default_usage = v.get<double>();
    else if (name == "serviceable_min") c.serviceable_min = v.get<int>();
    else if (name == "serviceable_pct") c.serviceable_pct = v.get<double>();
    else if (name == "sustain_pct") c.sustain_pct = v.get<double>();
    else if (name == "objective_kind") {
      const auto s = v.get<std::string>();
      if (s == "checks") c.objective_kind = ObjectiveKind::MinChecks;
      else if (s == "checks+rft") c.objective_kind = ObjectiveKind::MinChecksMaxRft;
      else throw ConfigError("objective_kind must be 'checks' or 'checks+rft'");
    } else if (name == "seed") c.seed = v.get<std::uint64_t>();
    else if (name == "num_types") c.num_types = v.get<int>();
    else if (name == "num_standards") c.num_standards = v.get<int>();
    else if (name == "standard_prob") c.standard_prob = v.get<double>();
    else if (name == "min_duration") c.min_duration = v.get<int>();
    else if (name == "max_duration") c.max_duration = v.get<int>();
    else if (name == "min_required") c.min_required = v.get<int>();
    else if (name == "max_required") c.max_required = v.get<int>();
    else throw ConfigError("unknown parameter '" + name + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("parameter '" + name + "': " + e.what());
  }
}

inline void from_json(const nlohmann::json& j, GenConfig& c) {
  c = GenConfig{};
  for (const auto& [k, v] : j.items()) set_parameter(c, k, v);
}

// ---------------------------------------------------------------------------

inline std::vector<Mission> generate_missions(const GenConfig& cfg, Rng& rng) {
  struct Draft {
    Mission m;
    int slot;
  };
  std::vector<Draft> drafts;
  const int T = cfg.num_periods;
  for (int slot = 0; slot < cfg.parallel_missions; ++slot) {
    int t = 1;
    while (t <= T) {
      Mission m;
      const int duration = static_cast<int>(rng.uniform_int(cfg.min_duration, cfg.max_duration));
      m.window = {t, std::min(T, t + duration - 1)};
      static constexpr int kMinAssign[] = {2, 3, 6};
      m.min_assign = std::min(kMinAssign[rng.uniform_index(3)], m.window.size());
      m.required = static_cast<int>(rng.uniform_int(cfg.min_required, cfg.max_required));
      m.hours = std::floor(rng.triangular(30, 50, 80));
      m.type = "T" + std::to_string(rng.uniform_index(cfg.num_types));
      if (rng.bernoulli(cfg.standard_prob)) m.standard = "S" + std::to_string(rng.uniform_index(cfg.num_standards));
      drafts.push_back({std::move(m), slot});
      t = drafts.back().m.window.last + 1;
    }
  }
  std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return std::pair(a.m.window.first, a.slot) < std::pair(b.m.window.first, b.slot);
  });
  std::vector<Mission> out;
  for (auto& d : drafts) {
    d.m.id = "M" + std::to_string(out.size());
    out.push_back(std::move(d.m));
  }
  return out;
}

namespace gen_detail {

// Peak over periods of the summed requirement of missions matching pred.
template <typename Pred>
int peak_requirement(const std::vector<Mission>& missions, int T, Pred pred) {
  int best = 0;
  for (int t = 1; t <= T; ++t) {
    int sum = 0;
    for (const auto& m : missions)
      if (m.window.contains(t) && pred(m)) sum += m.required;
    best = std::max(best, sum);
  }
  return best;
}

}  // namespace gen_detail

inline std::vector<Aircraft> generate_fleet(const GenConfig& cfg, const std::vector<Mission>& missions, Rng& rng) {
  const int n = cfg.total_fleet();
  const int T = cfg.num_periods;
  std::vector<int> need(cfg.num_types, 0);
  for (int y = 0; y < cfg.num_types; ++y) {
    const auto type = "T" + std::to_string(y);
    need[y] = gen_detail::peak_requirement(missions, T, [&](const Mission& m) { return m.type == type; });
  }
  int total_need = 0;
  for (int v : need) total_need += v;
  if (total_need > n)
    throw GenerationError("fleet of " + std::to_string(n) + " cannot cover a peak requirement of " +
                          std::to_string(total_need) + " aircraft");

  std::vector<int> types;
  for (int y = 0; y < cfg.num_types; ++y) types.insert(types.end(), need[y], y);
  for (int k = total_need; k < n; ++k) {
    int y = 0;
    if (total_need > 0) {
      int r = static_cast<int>(rng.uniform_int(0, total_need - 1));
      while (r >= need[y]) r -= need[y++];
    } else {
      y = rng.uniform_index(cfg.num_types);
    }
    types.push_back(y);
  }
  std::vector<Aircraft> fleet(n);
  for (int i = 0; i < n; ++i) {
    fleet[i].id = "A" + std::to_string(i);
    fleet[i].type = "T" + std::to_string(types[i]);
  }

  // Each (type, standard) requirement is held by twice its peak demand.
  std::set<std::pair<std::string, std::string>> reqs;
  for (const auto& m : missions)
    if (m.standard) reqs.insert({m.type, *m.standard});
  for (const auto& [type, standard] : reqs) {
    const int peak = gen_detail::peak_requirement(missions, T, [&](const Mission& m) {
      return m.type == type && m.standard == standard;
    });
    std::vector<int> pool;
    for (int i = 0; i < n; ++i)
      if (fleet[i].type == type) pool.push_back(i);
    if (static_cast<int>(pool.size()) < peak)
      throw GenerationError("type " + type + " has fewer aircraft than standard " + standard + " requires");
    for (int i : rng.sample(pool, static_cast<std::size_t>(2 * peak))) fleet[i].standards.insert(standard);
  }
  return fleet;
}

inline void generate_initial_state(const GenConfig& cfg, std::vector<Aircraft>& fleet,
                                   const std::vector<Mission>& missions, Rng& rng) {
  const int n = static_cast<int>(fleet.size());
  const int M = cfg.check_duration;
  const double HM = cfg.flight_max;
  const int EM = cfg.calendar_max;

  const double np = rng.uniform_real(0.0, cfg.capacity_pct);
  // Remaining check periods are drawn from 1..M-1 so that known
  // maintenance occupies at most the first M-1 periods.
  const int nv = M >= 2 ? static_cast<int>(std::floor(n * np)) : 0;
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  std::vector<bool> in_maint(n, false);
  for (int i : rng.sample(all, static_cast<std::size_t>(nv))) {
    in_maint[i] = true;
    fleet[i].in_maint_remaining = static_cast<int>(rng.uniform_int(1, M - 1));
    fleet[i].rft_init = HM;
    fleet[i].rct_init = EM + fleet[i].in_maint_remaining;
  }
  for (int i = 0; i < n; ++i) {
    if (in_maint[i]) continue;
    const int rct = static_cast<int>(rng.uniform_int(0, EM));
    const int noisy = rct + static_cast<int>(rng.uniform_int(-3, 3));
    fleet[i].rct_init = rct;
    fleet[i].rft_init = EM > 0 ? std::clamp(noisy * HM / EM, 0.0, HM) : HM;
  }

  // Missions running at t = 1 already have R_j aircraft on them. Aircraft
  // able to finish their forced run are preferred.
  std::vector<bool> taken = in_maint;
  for (const auto& m : missions) {
    if (!m.window.contains(1)) continue;
    const int elapsed = static_cast<int>(rng.uniform_int(0, 2 * m.min_assign));
    const int forced = std::min(std::max(0, m.min_assign - elapsed), m.window.size());
    std::vector<int> fit, rest;
    for (int i = 0; i < n; ++i) {
      if (taken[i] || !can_fly(fleet[i], m)) continue;
      const bool ok = fleet[i].rct_init > forced && fleet[i].rft_init >= m.hours * forced;
      (ok ? fit : rest).push_back(i);
    }
    auto chosen = rng.sample(fit, static_cast<std::size_t>(m.required));
    if (static_cast<int>(chosen.size()) < m.required) {
      auto extra = rng.sample(rest, static_cast<std::size_t>(m.required) - chosen.size());
      chosen.insert(chosen.end(), extra.begin(), extra.end());
    }
    if (static_cast<int>(chosen.size()) < m.required)
      throw GenerationError("not enough free aircraft to preassign mission " + m.id);
    for (int i : chosen) {
      taken[i] = true;
      fleet[i].preassigned = Preassignment{m.id, elapsed};
    }
  }
}

inline std::vector<Cluster> derive_clusters(const GenConfig& cfg, const std::vector<Aircraft>& fleet,
                                            const std::vector<Mission>& missions) {
  const int T = cfg.num_periods;
  std::vector<std::pair<std::string, std::optional<std::string>>> keys;
  for (const auto& m : missions) {
    std::pair<std::string, std::optional<std::string>> key{m.type, m.standard};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  std::vector<Cluster> out;
  for (const auto& [type, standard] : keys) {
    Cluster c;
    c.id = "K" + std::to_string(out.size());
    Mission probe;
    probe.type = type;
    probe.standard = standard;
    std::vector<int> nm;
    for (const auto& a : fleet)
      if (can_fly(a, probe)) {
        c.members.push_back(a.id);
        nm.push_back(a.in_maint_remaining);
      }
    const int q = static_cast<int>(c.members.size());
    if (q == 0) throw GenerationError("cluster for type " + type + " has no candidate aircraft");
    const int floor_serv = static_cast<int>(std::ceil(std::max(cfg.serviceable_pct * q, double(cfg.serviceable_min)) - 1e-9));
    const int cap = std::max(0, q - floor_serv);
    c.maint_cap.assign(T, cap);
    c.sustain_floor.assign(T, cfg.sustain_pct * q * cfg.flight_max);
    c.known_in_maint.assign(T, 0);
    for (int t = 1; t <= T; ++t)
      for (int v : nm) c.known_in_maint[t - 1] += v >= t;
    out.push_back(std::move(c));
  }
  return out;
}

inline Instance generate_instance(const GenConfig& cfg) {
  cfg.check();
  Rng mission_rng = Rng::stream(cfg.seed, "missions");
  Rng fleet_rng = Rng::stream(cfg.seed, "fleet");
  Rng init_rng = Rng::stream(cfg.seed, "initial");

  Instance inst;
  auto& p = inst.params;
  p.num_periods = cfg.num_periods;
  p.check_duration = cfg.check_duration;
  p.capacity = cfg.capacity();
  p.calendar_max = cfg.calendar_max;
  p.calendar_min = cfg.calendar_min();
  p.flight_max = cfg.flight_max;
  p.default_usage = cfg.default_usage;

  inst.missions = generate_missions(cfg, mission_rng);
  inst.fleet = generate_fleet(cfg, inst.missions, fleet_rng);
  generate_initial_state(cfg, inst.fleet, inst.missions, init_rng);
  inst.clusters = derive_clusters(cfg, inst.fleet, inst.missions);

  p.in_maintenance.assign(cfg.num_periods, 0);
  for (const auto& a : inst.fleet)
    for (int t = 1; t <= std::min(a.in_maint_remaining, cfg.num_periods); ++t) ++p.in_maintenance[t - 1];
  return inst;
}

// ---------------------------------------------------------------------------
// Scenario grids

struct ScenarioGrid {
  GenConfig base;
  std::vector<std::pair<std::string, nlohmann::json>> overrides;
  int instances_per_scenario = 1;
};

struct GridEntry {
  std::string scenario;
  int index = 0;
  GenConfig config;
};

inline std::uint64_t instance_seed(std::uint64_t base_seed, int index) {
  return splitmix64(base_seed ^ splitmix64(static_cast<std::uint64_t>(index) + 0x5eedull));
}

inline std::string scenario_name(const std::string& param, const nlohmann::json& v) {
  return param + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
}

/// Base scenario first, then one scenario per override. Instance k of every
/// scenario shares the seed of instance k of the base.
inline std::vector<GridEntry> expand_grid(const ScenarioGrid& grid) {
  std::vector<std::pair<std::string, GenConfig>> scenarios{{"base", grid.base}};
  for (const auto& [name, value] : grid.overrides) {
    GenConfig c = grid.base;
    set_parameter(c, name, value);
    scenarios.push_back({scenario_name(name, value), c});
  }
  std::vector<GridEntry> out;
  for (const auto& [name, cfg] : scenarios)
    for (int k = 0; k < grid.instances_per_scenario; ++k) {
      GridEntry e{name, k, cfg};
      e.config.seed = instance_seed(grid.base.seed, k);
      out.push_back(std::move(e));
    }
  return out;
}

inline constexpr int kGridFormatVersion = 1;

/// Accepts either a grid document {"version", "base", "overrides",
/// "instances_per_scenario"} or a bare GenConfig object.
inline ScenarioGrid grid_from_json(const nlohmann::json& j) {
  ScenarioGrid g;
  if (!j.is_object()) throw ConfigError("grid config must be a JSON object");
  if (!j.contains("base")) {
    g.base = j.get<GenConfig>();
    return g;
  }
  const int version = j.value("version", kGridFormatVersion);
  if (version != kGridFormatVersion) throw ConfigError("unsupported grid version " + std::to_string(version));
  g.base = j.at("base").get<GenConfig>();
  g.instances_per_scenario = j.value("instances_per_scenario", 1);
  if (g.instances_per_scenario < 0) throw ConfigError("instances_per_scenario < 0");
  for (const auto& o : j.value("overrides", nlohmann::json::array())) {
    if (!o.is_array() || o.size() != 2 || !o[0].is_string())
      throw ConfigError("each override must be [parameter, value]");
    GenConfig probe = g.base;
    set_parameter(probe, o[0].get<std::string>(), o[1]);
    g.overrides.push_back({o[0].get<std::string>(), o[1]});
  }
  return g;
}

inline nlohmann::json grid_to_json(const ScenarioGrid& g) {
  nlohmann::json overrides = nlohmann::json::array();
  for (const auto& [k, v] : g.overrides) overrides.push_back({k, v});
  return {{"version", kGridFormatVersion},
          {"base", g.base},
          {"overrides", overrides},
          {"instances_per_scenario", g.instances_per_scenario}};
}

}  // namespace fmp
