#pragma once

// Direct evaluation of every planning constraint on a state grid.
//
// The checks mirror the rows emitted by mip::build_model one for one: a
// solution encoded as variable values satisfies every model row and bound
// exactly when check_solution() returns an empty report. Flight-time
// ledgers are completed canonically: u at its lower envelope and rft at its
// upper envelope, which is the completion most favourable to every other
// constraint and to both objectives.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"

namespace fmp {

inline constexpr double kFeasTol = 1e-6;

enum class Family {
  Capacity,
  MissionReq,
  State,
  MinAssign,
  ClusterServ,
  ClusterSust,
  FlightTime,
  Rft,
  Calendar,
  InitialFix,
};

inline constexpr int kNumFamilies = 10;

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Capacity: return "Capacity";
    case Family::MissionReq: return "MissionReq";
    case Family::State: return "State";
    case Family::MinAssign: return "MinAssign";
    case Family::ClusterServ: return "ClusterServ";
    case Family::ClusterSust: return "ClusterSust";
    case Family::FlightTime: return "FlightTime";
    case Family::Rft: return "Rft";
    case Family::Calendar: return "Calendar";
    case Family::InitialFix: return "InitialFix";
  }
  return "?";
}

struct Violation {
  Family family;
  int aircraft = -1;
  int mission = -1;
  int period = 0;
  int cluster = -1;
  double magnitude = 0.0;
};

struct ViolationReport {
  std::vector<Violation> entries;

  bool feasible() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  std::size_t count(Family f) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [f](const Violation& v) { return v.family == f; }));
  }
  void add(Family f, double mag, int i = -1, int j = -1, int t = 0, int k = -1) {
    entries.push_back({f, i, j, t, k, mag});
  }
};

/// Constraint evaluator bound to one instance. Holds the derived index sets
/// so repeated evaluations (search, enumeration) do not rebuild them.
class Checker {
 public:
  explicit Checker(const Instance& inst) : inst_(inst), sets_(derive_index_sets(inst)) {
    usage_ub_ = std::max(inst.params.default_usage, 0.0);
    if (!inst.missions.empty()) {
      usage_ub_ = 0.0;
      for (const auto& m : inst.missions) usage_ub_ = std::max(usage_ub_, m.hours);
    }
    for (int i = 0; i < inst.num_aircraft(); ++i) {
      forced_.push_back(forced_run(inst, sets_, i));
      initial_.push_back(initial_window_sets(inst.fleet[i], inst.params));
    }
  }

  const Instance& instance() const { return inst_; }
  const IndexSets& sets() const { return sets_; }
  double usage_upper_bound() const { return usage_ub_; }
  const std::optional<ForcedRun>& forced(int i) const { return forced_[i]; }
  const InitialWindows& initial(int i) const { return initial_[i]; }

  /// Whether (j, t, i) has a decision variable a_jti.
  bool has_assignment_var(int j, int t, int i) const {
    return j >= 0 && j < inst_.num_missions() && inst_.missions[j].window.contains(t) && sets_.is_eligible(j, i);
  }

  bool assigned(const Solution& s, int j, int t, int i) const {
    const Cell& c = s.at(i, t);
    return c.kind == CellKind::Mission && c.mission == j && has_assignment_var(j, t, i);
  }

  /// Number of check starts in T^s_t for aircraft i.
  int starts_covering(const Solution& s, int i, int t) const {
    int n = 0;
    const int lo = std::max(1, t - inst_.params.check_duration + 1);
    for (int q = lo; q <= t; ++q) n += s.at(i, q).kind == CellKind::CheckStart;
    return n;
  }

  /// Canonical a^s: 1 when (j, t, i) is assigned and does not continue the
  /// previous period (or a preassignment at t = 1).
  int assignment_start(const Solution& s, int j, int t, int i) const {
    if (!assigned(s, j, t, i)) return 0;
    if (t == 1) {
      const auto& pre = sets_.preassigned[j];
      return std::find(pre.begin(), pre.end(), i) == pre.end() ? 1 : 0;
    }
    const bool prev = inst_.missions[j].window.contains(t - 1) && assigned(s, j, t - 1, i);
    return prev ? 0 : 1;
  }

  /// Fills u, rft and rct for one aircraft. Ledgers must already be sized.
  void derive_row(Solution& s, int i) const {
    const auto& p = inst_.params;
    const auto& ac = inst_.fleet[i];
    double rft = ac.rft_init;
    int rct = ac.rct_init;
    for (int t = 1; t <= inst_.num_periods(); ++t) {
      const Cell& c = s.at(i, t);
      const int checks = starts_covering(s, i, t);
      double u = 0.0;
      if (c.kind == CellKind::Mission && has_assignment_var(c.mission, t, i)) u = std::max(u, inst_.missions[c.mission].hours);
      if (t > ac.in_maint_remaining) u = std::max(u, p.default_usage * (1 - checks));
      const int start = c.kind == CellKind::CheckStart;
      rft = std::min(p.flight_max, rft + p.flight_max * start - u);
      rct = (c.is_check() || t <= ac.in_maint_remaining) ? p.calendar_max : rct - 1;
      s.u[i][t - 1] = u;
      s.rft[i][t - 1] = rft;
      s.rct[i][t - 1] = rct;
    }
  }

  void derive(Solution& s) const {
    const int T = inst_.num_periods();
    const int n = inst_.num_aircraft();
    s.u.assign(n, std::vector<double>(T, 0.0));
    s.rft.assign(n, std::vector<double>(T, 0.0));
    s.rct.assign(n, std::vector<int>(T, 0));
    for (int i = 0; i < n; ++i) derive_row(s, i);
  }

  /// Constraints that involve aircraft i alone: grid well-formedness, single
  /// occupancy, minimum assignment, flight-time ledgers, calendar limits and
  /// initial fixings.
  void check_aircraft(const Solution& s, int i, ViolationReport& rep) const {
    const auto& p = inst_.params;
    const int T = inst_.num_periods();
    const int nm = inst_.fleet[i].in_maint_remaining;
    auto is_start = [&](int t) { return s.at(i, t).kind == CellKind::CheckStart ? 1 : 0; };

    // Grid well-formedness and single occupancy
    for (int t = 1; t <= T; ++t) {
      const Cell& c = s.at(i, t);
      const int checks = starts_covering(s, i, t);
      const bool covered = t <= nm || checks - is_start(t) > 0;
      if (c.kind == CellKind::Mission && !has_assignment_var(c.mission, t, i)) rep.add(Family::State, 1.0, i, c.mission, t);
      if (c.kind == CellKind::CheckBody && !covered) rep.add(Family::State, 1.0, i, -1, t);
      if (c.kind == CellKind::Free && covered) rep.add(Family::State, 1.0, i, -1, t);
      const int load = checks + (c.kind == CellKind::Mission && has_assignment_var(c.mission, t, i));
      if (load > 1) rep.add(Family::State, load - 1, i, -1, t);
    }

    // Minimum consecutive assignment
    for (int j : sets_.options[i]) {
      const auto& m = inst_.missions[j];
      for (int t : m.window) {
        int starts = 0;
        for (int q = std::max(m.window.first, t - m.min_assign); q <= t; ++q) starts += assignment_start(s, j, q, i);
        const int a = assigned(s, j, t, i);
        if (starts > a) rep.add(Family::MinAssign, starts - a, i, j, t);
      }
    }

    // Flight time and remaining flight time
    if (static_cast<int>(s.u.size()) > i && static_cast<int>(s.rft.size()) > i) {
      double prev = inst_.fleet[i].rft_init;
      for (int t = 1; t <= T; ++t) {
        const double u = s.u[i][t - 1];
        const double rft = s.rft[i][t - 1];
        const int checks = starts_covering(s, i, t);
        const Cell& c = s.at(i, t);
        const double hours = c.kind == CellKind::Mission && has_assignment_var(c.mission, t, i) ? inst_.missions[c.mission].hours : 0.0;
        if (u < hours - kFeasTol) rep.add(Family::FlightTime, hours - u, i, -1, t);
        const double floor_u = p.default_usage * (1 - checks);
        if (t > nm && p.default_usage != 0.0 && u < floor_u - kFeasTol) rep.add(Family::FlightTime, floor_u - u, i, -1, t);
        if (u < -kFeasTol) rep.add(Family::FlightTime, -u, i, -1, t);
        if (u > usage_ub_ + kFeasTol) rep.add(Family::FlightTime, u - usage_ub_, i, -1, t);
        const double cap = prev + p.flight_max * is_start(t) - u;
        if (rft > cap + kFeasTol) rep.add(Family::Rft, rft - cap, i, -1, t);
        if (rft < p.flight_max * checks - kFeasTol) rep.add(Family::Rft, p.flight_max * checks - rft, i, -1, t);
        if (rft < -kFeasTol) rep.add(Family::Rft, -rft, i, -1, t);
        if (rft > p.flight_max + kFeasTol) rep.add(Family::Rft, rft - p.flight_max, i, -1, t);
        prev = rft;
      }
    }

    // Calendar limits
    for (int t = 1; t <= T; ++t) {
      const auto w = window_sets(t, p);
      int in_blocked = 0;
      for (int q : w.blocked) in_blocked += is_start(q);
      if (in_blocked > 1) rep.add(Family::Calendar, in_blocked - 1, i, -1, t);
      if (w.forces_next && is_start(t)) {
        int next = 0;
        for (int q : w.next_check) next += is_start(q);
        if (next < 1) rep.add(Family::Calendar, 1.0, i, -1, t);
      }
    }
    const auto& init = initial_[i];
    for (int t : init.no_check)
      if (is_start(t)) rep.add(Family::Calendar, 1.0, i, -1, t);
    if (init.forces_check) {
      int found = 0;
      for (int t : init.must_check) found += is_start(t);
      if (found < 1) rep.add(Family::Calendar, 1.0, i, -1, init.must_check.empty() ? 0 : init.must_check.last);
    }

    // Fixed initial cells
    for (int t = 1; t <= std::min(nm, T); ++t) {
      const Cell& c = s.at(i, t);
      if (c.kind == CellKind::CheckStart || (c.kind == CellKind::Mission && has_assignment_var(c.mission, t, i)))
        rep.add(Family::InitialFix, 1.0, i, c.mission, t);
    }
    if (const auto& run = forced_[i])
      for (int t : run->periods)
        if (!assigned(s, run->mission, t, i)) rep.add(Family::InitialFix, 1.0, i, run->mission, t);
  }

  /// Fleet-level constraints: maintenance capacity, mission coverage and
  /// cluster service levels.
  void check_coupling(const Solution& s, ViolationReport& rep) const {
    const auto& p = inst_.params;
    const int T = inst_.num_periods();
    const int n = inst_.num_aircraft();
    const bool have_usage = static_cast<int>(s.rft.size()) == n;
    for (int t = 1; t <= T; ++t) {
      int busy = p.known_in_maintenance(t);
      for (int i = 0; i < n; ++i) busy += starts_covering(s, i, t);
      if (busy > p.capacity) rep.add(Family::Capacity, busy - p.capacity, -1, -1, t);
    }
    for (int j = 0; j < inst_.num_missions(); ++j) {
      const auto& m = inst_.missions[j];
      for (int t : m.window) {
        int have = 0;
        for (int i : sets_.eligible[j]) have += assigned(s, j, t, i);
        if (have < m.required) rep.add(Family::MissionReq, m.required - have, -1, j, t);
      }
    }
    for (std::size_t k = 0; k < inst_.clusters.size(); ++k) {
      const auto& cl = inst_.clusters[k];
      for (int t = 1; t <= T; ++t) {
        int busy = cl.known_in_maint[t - 1];
        for (int i : sets_.members[k]) busy += starts_covering(s, i, t);
        if (busy > cl.maint_cap[t - 1]) rep.add(Family::ClusterServ, busy - cl.maint_cap[t - 1], -1, -1, t, static_cast<int>(k));
        if (!have_usage) continue;
        double total = 0.0;
        for (int i : sets_.members[k]) total += s.rft[i][t - 1];
        if (total < cl.sustain_floor[t - 1] - kFeasTol)
          rep.add(Family::ClusterSust, cl.sustain_floor[t - 1] - total, -1, -1, t, static_cast<int>(k));
      }
    }
  }

  ViolationReport check(const Solution& s) const {
    ViolationReport rep;
    const int n = inst_.num_aircraft();
    if (s.num_aircraft() != n || (n > 0 && s.num_periods() != inst_.num_periods())) {
      rep.add(Family::State, 1.0);
      return rep;
    }
    for (int i = 0; i < n; ++i) check_aircraft(s, i, rep);
    check_coupling(s, rep);
    return rep;
  }

 private:
  const Instance& inst_;
  IndexSets sets_;
  double usage_ub_ = 0.0;
  std::vector<std::optional<ForcedRun>> forced_;
  std::vector<InitialWindows> initial_;
};

/// Fills u, rft and rct from the state grid: u at max(mission hours,
/// U_min when not in check), rft by the recurrence capped at H_M, rct reset
/// to E_M while in check and decremented otherwise.
inline void derive_usage(const Instance& inst, Solution& s) { Checker(inst).derive(s); }

/// Evaluates every constraint family. Requires derive_usage() to have run
/// for the flight-time families to be checked.
inline ViolationReport check_solution(const Instance& inst, const Solution& s) { return Checker(inst).check(s); }

inline double objective(const Instance& inst, const Solution& s, ObjectiveKind kind) {
  const double checks = s.count_checks();
  if (kind == ObjectiveKind::MinChecks) return checks;
  double end_rft = 0.0;
  const int T = inst.num_periods();
  if (T > 0)
    for (const auto& row : s.rft) end_rft += row[T - 1];
  return checks * inst.params.flight_max - end_rft;
}

}  // namespace fmp
