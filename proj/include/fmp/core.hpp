#pragma once

// Domain types for long-term flight and maintenance planning, the derived
// index sets, and the time-parametric window sets shared by the model
// builder and the validator.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fmp {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Raised when an instance is not internally consistent (unknown ids,
// mismatched vector lengths, broken invariants).
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inclusive range of 1-based periods. Empty when first > last.
struct PeriodRange {
  int first = 1;
  int last = 0;

  static constexpr PeriodRange empty_range() { return {1, 0}; }

  constexpr bool empty() const { return first > last; }
  constexpr int size() const { return empty() ? 0 : last - first + 1; }
  constexpr bool contains(int t) const { return t >= first && t <= last; }

  constexpr PeriodRange clip(int lo, int hi) const {
    PeriodRange r{std::max(first, lo), std::min(last, hi)};
    return r.empty() ? empty_range() : r;
  }

  struct iterator {
    int t;
    constexpr int operator*() const { return t; }
    constexpr iterator& operator++() { ++t; return *this; }
    constexpr bool operator==(const iterator&) const = default;
  };
  constexpr iterator begin() const { return {first}; }
  constexpr iterator end() const { return {empty() ? first : last + 1}; }

  constexpr bool operator==(const PeriodRange& o) const {
    return (empty() && o.empty()) || (first == o.first && last == o.last);
  }
};

struct Params {
  int num_periods = 0;
  int check_duration = 0;     // M
  int capacity = 0;           // C_max
  int calendar_max = 0;       // E_M
  int calendar_min = 0;       // E_m
  double flight_max = 0.0;    // H_M
  double default_usage = 0.0; // U_min
  /// Aircraft known to be in maintenance per period, index t-1. Either empty
  /// (all zero) or of length num_periods.
  std::vector<int> in_maintenance;

  int known_in_maintenance(int t) const {
    return t >= 1 && t <= static_cast<int>(in_maintenance.size()) ? in_maintenance[t - 1] : 0;
  }
};

struct Mission {
  std::string id;
  PeriodRange window;         // T_j
  double hours = 0.0;         // H_j
  int required = 1;           // R_j
  int min_assign = 1;         // MT_j
  std::string type;           // Y_j
  std::optional<std::string> standard;  // Q_j
};

struct Preassignment {
  std::string mission;
  int elapsed = 0;            // At_j
};

struct Aircraft {
  std::string id;
  std::string type;
  std::set<std::string> standards;
  double rft_init = 0.0;
  int rct_init = 0;
  int in_maint_remaining = 0; // NM_i
  std::optional<Preassignment> preassigned;
};

struct Cluster {
  std::string id;
  std::vector<std::string> members;
  std::vector<int> maint_cap;          // A^K_kt, index t-1
  std::vector<double> sustain_floor;   // H^K_kt
  std::vector<int> known_in_maint;     // N^K_kt
};

struct Instance {
  Params params;
  std::vector<Mission> missions;
  std::vector<Aircraft> fleet;
  std::vector<Cluster> clusters;
  /// Built by the fixed-interval-scheduling reduction; relaxes the
  /// calendar-time upper bound so that rct_init = |T|+1 is accepted.
  bool reduction = false;

  int num_periods() const { return params.num_periods; }
  int num_aircraft() const { return static_cast<int>(fleet.size()); }
  int num_missions() const { return static_cast<int>(missions.size()); }
};

/// True when an aircraft is eligible for a mission (type equality, and the
/// mission's standard, if any, held by the aircraft).
inline bool can_fly(const Aircraft& aircraft, const Mission& mission) {
  if (aircraft.type != mission.type) return false;
  return !mission.standard || aircraft.standards.count(*mission.standard) > 0;
}

// ---------------------------------------------------------------------------
// Window sets

struct CheckWindows {
  PeriodRange started;    // T^s_t: starts whose check covers t
  PeriodRange blocked;    // T^m_t: at most one check start in here
  PeriodRange next_check; // T^M_t: a follow-up check must start in here
  bool forces_next = false;
};

inline void require_period(int t, const Params& params) {
  if (t < 1 || t > params.num_periods)
    throw DomainError("period " + std::to_string(t) + " outside [1, " +
                      std::to_string(params.num_periods) + "]");
}

/// Check start periods whose check is still in progress at t.
inline PeriodRange started_window(int t, const Params& params) {
  require_period(t, params);
  return PeriodRange{std::max(1, t - params.check_duration + 1), t}.clip(1, t);
}

inline CheckWindows window_sets(int t, const Params& params) {
  require_period(t, params);
  const int T = params.num_periods;
  const int M = params.check_duration;
  CheckWindows w;
  w.started = started_window(t, params);
  w.blocked = PeriodRange{t, std::min(T, t + M + params.calendar_min - 1)}.clip(1, T);
  w.forces_next = t <= T - params.calendar_max - M;
  w.next_check = w.forces_next
      ? PeriodRange{t + M + params.calendar_min - 1, t + M + params.calendar_max - 1}.clip(1, T)
      : PeriodRange::empty_range();
  return w;
}

struct InitialWindows {
  PeriodRange no_check;     // T^{m_ini}_i
  PeriodRange must_check;   // T^{M_ini}_i
  bool forces_check = false;
};

inline InitialWindows initial_window_sets(const Aircraft& aircraft, const Params& params) {
  const int T = params.num_periods;
  const int rct = aircraft.rct_init;
  const int lo = std::max(0, rct - params.calendar_max + params.calendar_min);
  InitialWindows w;
  w.no_check = PeriodRange{1, lo}.clip(1, T);
  w.forces_check = rct <= T;
  // An exhausted calendar (rct_init = 0) still leaves period 1 as the
  // only place the check can start.
  w.must_check = w.forces_check ? PeriodRange{std::max(1, lo), std::max(1, rct)}.clip(1, T)
                                : PeriodRange::empty_range();
  return w;
}

/// Periods over which mission starts must still be covered at t
/// (T^MT_jt = {max(1, t - MT_j) .. t}).
inline PeriodRange min_assign_window(const Mission& mission, int t) {
  if (!mission.window.contains(t))
    throw DomainError("period " + std::to_string(t) + " outside mission " + mission.id);
  return PeriodRange{std::max(1, t - mission.min_assign), t};
}

// ---------------------------------------------------------------------------
// Index sets

struct IndexSets {
  std::vector<std::vector<int>> missions_at;   // J_t, index t (0 unused)
  std::vector<std::vector<int>> eligible;      // I_j
  std::vector<std::vector<int>> options;       // O_i
  std::vector<std::vector<int>> members;       // I_k
  std::vector<std::vector<int>> preassigned;   // A^init_j
  std::vector<std::vector<int>> clusters_of;   // k such that i in I_k
  std::map<std::string, int> mission_index;
  std::map<std::string, int> aircraft_index;

  bool operator==(const IndexSets&) const = default;

  bool is_eligible(int j, int i) const {
    return std::binary_search(eligible[j].begin(), eligible[j].end(), i);
  }
};

inline IndexSets derive_index_sets(const Instance& inst) {
  const int T = inst.num_periods();
  IndexSets s;
  for (int i = 0; i < inst.num_aircraft(); ++i) {
    if (!s.aircraft_index.emplace(inst.fleet[i].id, i).second)
      throw StructuralError("duplicate aircraft id " + inst.fleet[i].id);
  }
  std::set<std::string> fleet_types;
  for (const auto& a : inst.fleet) fleet_types.insert(a.type);

  s.missions_at.assign(T + 1, {});
  s.eligible.assign(inst.num_missions(), {});
  s.options.assign(inst.num_aircraft(), {});
  s.preassigned.assign(inst.num_missions(), {});
  for (int j = 0; j < inst.num_missions(); ++j) {
    const auto& m = inst.missions[j];
    if (!s.mission_index.emplace(m.id, j).second)
      throw StructuralError("duplicate mission id " + m.id);
    if (!fleet_types.count(m.type) && !inst.fleet.empty())
      throw StructuralError("mission " + m.id + " references unknown type " + m.type);
    if (m.window.first < 1 || m.window.last > T)
      throw StructuralError("mission " + m.id + " window outside horizon");
    for (int t : m.window) s.missions_at[t].push_back(j);
    for (int i = 0; i < inst.num_aircraft(); ++i) {
      if (can_fly(inst.fleet[i], m)) {
        s.eligible[j].push_back(i);
        s.options[i].push_back(j);
      }
    }
  }
  for (int i = 0; i < inst.num_aircraft(); ++i) {
    const auto& pre = inst.fleet[i].preassigned;
    if (!pre) continue;
    auto it = s.mission_index.find(pre->mission);
    if (it == s.mission_index.end())
      throw StructuralError("aircraft " + inst.fleet[i].id + " preassigned to unknown mission " +
                            pre->mission);
    s.preassigned[it->second].push_back(i);
  }
  s.members.assign(inst.clusters.size(), {});
  s.clusters_of.assign(inst.num_aircraft(), {});
  for (std::size_t k = 0; k < inst.clusters.size(); ++k) {
    for (const auto& id : inst.clusters[k].members) {
      auto it = s.aircraft_index.find(id);
      if (it == s.aircraft_index.end())
        throw StructuralError("cluster " + inst.clusters[k].id + " references unknown aircraft " + id);
      s.members[k].push_back(it->second);
    }
    std::sort(s.members[k].begin(), s.members[k].end());
    for (int i : s.members[k]) s.clusters_of[i].push_back(static_cast<int>(k));
  }
  return s;
}

/// Throws StructuralError when vector lengths or value ranges break the
/// documented invariants. Mission coverage (|I_j| >= R_j) is not checked
/// here; the validator reports it as infeasibility.
inline void validate_instance(const Instance& inst) {
  const auto& p = inst.params;
  const int T = p.num_periods;
  auto fail = [](const std::string& what) { throw StructuralError(what); };
  if (T < 0) fail("negative horizon");
  if (p.check_duration < 0 || p.capacity < 0 || p.flight_max < 0 || p.default_usage < 0)
    fail("negative global parameter");
  if (p.calendar_min < 0 || p.calendar_min > p.calendar_max) fail("need 0 <= E_m <= E_M");
  if (!p.in_maintenance.empty() && static_cast<int>(p.in_maintenance.size()) != T)
    fail("in_maintenance must have one entry per period");
  for (int n : p.in_maintenance)
    if (n < 0 || n > p.capacity) fail("in_maintenance entry outside [0, C_max]");
  for (const auto& m : inst.missions) {
    if (m.hours < 0) fail("mission " + m.id + ": negative hours");
    if (m.required < 1) fail("mission " + m.id + ": required < 1");
    if (m.window.empty() || m.window.first < 1 || m.window.last > T)
      fail("mission " + m.id + ": window outside horizon");
    if (m.min_assign < 1 || m.min_assign > m.window.size())
      fail("mission " + m.id + ": min_assign outside [1, |T_j|]");
  }
  for (const auto& a : inst.fleet) {
    if (a.rft_init < 0 || a.rft_init > p.flight_max) fail("aircraft " + a.id + ": rft_init outside [0, H_M]");
    // An aircraft finishing a check carries its remaining check periods on
    // top of a full calendar.
    const int rct_cap = inst.reduction ? T + 1 : p.calendar_max + a.in_maint_remaining;
    if (a.rct_init < 0 || a.rct_init > rct_cap) fail("aircraft " + a.id + ": rct_init out of range");
    if (a.in_maint_remaining < 0 || a.in_maint_remaining > p.check_duration)
      fail("aircraft " + a.id + ": in_maint_remaining outside [0, M]");
    if (a.in_maint_remaining > 0 && a.preassigned)
      fail("aircraft " + a.id + ": in maintenance and preassigned");
    if (a.preassigned && a.preassigned->elapsed < 0)
      fail("aircraft " + a.id + ": negative elapsed assignment");
  }
  for (const auto& c : inst.clusters) {
    const auto q = static_cast<int>(c.members.size());
    if (q == 0) fail("cluster " + c.id + " has no members");
    if (static_cast<int>(c.maint_cap.size()) != T || static_cast<int>(c.sustain_floor.size()) != T ||
        static_cast<int>(c.known_in_maint.size()) != T)
      fail("cluster " + c.id + ": per-period vectors must have one entry per period");
    for (int t = 0; t < T; ++t) {
      if (c.maint_cap[t] > q) fail("cluster " + c.id + ": maint_cap above member count");
      if (c.sustain_floor[t] > q * p.flight_max + 1e-9) fail("cluster " + c.id + ": sustain_floor above Q*H_M");
    }
  }
  const auto sets = derive_index_sets(inst);
  for (int i = 0; i < inst.num_aircraft(); ++i) {
    const auto& pre = inst.fleet[i].preassigned;
    if (!pre) continue;
    const int j = sets.mission_index.at(pre->mission);
    if (!inst.missions[j].window.contains(1)) fail("aircraft " + inst.fleet[i].id + ": preassigned mission not active at t=1");
    if (!sets.is_eligible(j, i)) fail("aircraft " + inst.fleet[i].id + ": preassigned to ineligible mission");
  }
}

/// Leading periods an aircraft must keep flying its preassigned mission:
/// max(0, MT_j - At_j) periods from t = 1, clipped to the mission window.
struct ForcedRun {
  int mission = -1;
  PeriodRange periods;
};

inline std::optional<ForcedRun> forced_run(const Instance& inst, const IndexSets& sets, int i) {
  const auto& pre = inst.fleet[i].preassigned;
  if (!pre) return std::nullopt;
  const int j = sets.mission_index.at(pre->mission);
  const auto& m = inst.missions[j];
  const int len = std::max(0, m.min_assign - pre->elapsed);
  return ForcedRun{j, PeriodRange{1, len}.clip(m.window.first, m.window.last)};
}

enum class ObjectiveKind { MinChecks, MinChecksMaxRft };

// ---------------------------------------------------------------------------
// Solution

enum class CellKind : std::uint8_t { Free, Mission, CheckStart, CheckBody };

struct Cell {
  CellKind kind = CellKind::Free;
  int mission = -1;  // valid when kind == Mission

  static constexpr Cell free() { return {}; }
  static constexpr Cell check_start() { return {CellKind::CheckStart, -1}; }
  static constexpr Cell check_body() { return {CellKind::CheckBody, -1}; }
  static constexpr Cell on_mission(int j) { return {CellKind::Mission, j}; }

  constexpr bool is_check() const { return kind == CellKind::CheckStart || kind == CellKind::CheckBody; }
  constexpr bool operator==(const Cell&) const = default;
};

/// Per-aircraft, per-period state grid plus derived ledgers. Rows are
/// aircraft, columns are periods 1..T stored at index t-1.
struct Solution {
  std::vector<std::vector<Cell>> state;
  std::vector<std::vector<double>> u;
  std::vector<std::vector<double>> rft;
  std::vector<std::vector<int>> rct;

  Solution() = default;
  Solution(int num_aircraft, int num_periods)
      : state(num_aircraft, std::vector<Cell>(num_periods)) {}

  /// Empty grid with the remaining periods of initial checks marked.
  static Solution blank(const Instance& inst) {
    Solution s(inst.num_aircraft(), inst.num_periods());
    for (int i = 0; i < inst.num_aircraft(); ++i) {
      const int nm = std::min(inst.fleet[i].in_maint_remaining, inst.num_periods());
      for (int t = 1; t <= nm; ++t) s.at(i, t) = Cell::check_body();
    }
    return s;
  }

  int num_aircraft() const { return static_cast<int>(state.size()); }
  int num_periods() const { return state.empty() ? 0 : static_cast<int>(state[0].size()); }

  Cell& at(int i, int t) { return state[i][t - 1]; }
  const Cell& at(int i, int t) const { return state[i][t - 1]; }

  /// Marks a check start at t and the following M-1 periods (clipped).
  void place_check(int i, int t, int duration) {
    at(i, t) = Cell::check_start();
    for (int s = t + 1; s < t + duration && s <= num_periods(); ++s) at(i, s) = Cell::check_body();
  }

  int count_checks() const {
    int n = 0;
    for (const auto& row : state)
      for (const auto& c : row) n += c.kind == CellKind::CheckStart;
    return n;
  }

  bool same_states(const Solution& o) const { return state == o.state; }
};

}  // namespace fmp
