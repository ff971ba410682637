#pragma once

// Simulated annealing over state grids with release/repair moves.
//
// Every move is derived from one violation: release frees a set of whole
// blocks (check blocks or mission runs) of one or two aircraft, repair puts
// new blocks in place and greedily re-covers demand it uncovered. Blocks
// keep checks atomic, runs at least as long as their minimum assignment and
// initial fixings untouched, so the penalty only has to steer the resource
// constraints (capacity, coverage, hours, calendar, cluster levels).

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "core.hpp"
#include "mip.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "validator.hpp"

namespace fmp {

struct SaParams {
  double time_limit = 60.0;           // seconds
  long iter_limit = 5'000'000;
  double initial_temperature = 0.0;   // <= 0: calibrated on 100 sample moves
  double cooling_rate = 0.9995;
  double release_fraction = 0.1;      // share of moves that release an extra random block
  bool stop_on_feasible = true;
  std::uint64_t seed = 1;
  ObjectiveKind objective = ObjectiveKind::MinChecks;
};

inline void validate_params(const SaParams& p) {
  if (!(p.cooling_rate > 0.0 && p.cooling_rate < 1.0)) throw DomainError("cooling_rate must be in (0, 1)");
  if (!(p.time_limit > 0.0)) throw DomainError("time_limit must be positive");
  if (p.iter_limit <= 0) throw DomainError("iter_limit must be positive");
  if (p.release_fraction < 0.0 || p.release_fraction > 1.0) throw DomainError("release_fraction must be in [0, 1]");
}

enum class SearchOutcome { Feasible, TimeLimit, IterLimit };

inline const char* outcome_name(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Feasible: return "Feasible";
    case SearchOutcome::TimeLimit: return "TimeLimit";
    case SearchOutcome::IterLimit: return "IterLimit";
  }
  return "?";
}

struct TracePoint {
  long iteration = 0;
  double penalty = 0.0;
};

struct SearchTrace {
  long iterations = 0;
  std::vector<TracePoint> best_penalty;  // one point per improvement
  double wall_time = 0.0;
  SearchOutcome outcome = SearchOutcome::IterLimit;
  long accepted = 0;
  double initial_temperature = 0.0;
  long first_feasible = -1;
};

// ---------------------------------------------------------------------------
// Energy

struct PenaltyWeights {
  std::array<double, kNumFamilies> family{};
  double hour_scale = 1.0;       // applied to hour-valued families
  double objective_scale = 1e-3;
};

inline bool hour_valued(Family f) {
  return f == Family::FlightTime || f == Family::Rft || f == Family::ClusterSust;
}

inline PenaltyWeights default_weights(const Instance& inst) {
  PenaltyWeights w;
  w.family.fill(1.0);
  w.family[static_cast<int>(Family::State)] = 10.0;
  w.family[static_cast<int>(Family::MinAssign)] = 10.0;
  w.family[static_cast<int>(Family::InitialFix)] = 10.0;
  w.family[static_cast<int>(Family::Calendar)] = 2.0;
  w.hour_scale = inst.params.flight_max > 0 ? 10.0 / inst.params.flight_max : 1.0;
  return w;
}

inline double weighted_violations(const ViolationReport& rep, const PenaltyWeights& w) {
  double total = 0.0;
  for (const auto& v : rep.entries) {
    const double mag = hour_valued(v.family) ? v.magnitude * w.hour_scale : v.magnitude;
    total += w.family[static_cast<int>(v.family)] * mag;
  }
  return total;
}

inline double scaled_objective(const Instance& inst, double value, ObjectiveKind kind, const PenaltyWeights& w) {
  if (kind == ObjectiveKind::MinChecksMaxRft && inst.params.flight_max > 0) value /= inst.params.flight_max;
  return w.objective_scale * value;
}

/// Weighted violation magnitudes plus the scaled objective.
inline double penalty(const Instance& inst, const Solution& s, ObjectiveKind kind = ObjectiveKind::MinChecks) {
  const auto w = default_weights(inst);
  return weighted_violations(check_solution(inst, s), w) + scaled_objective(inst, objective(inst, s, kind), kind, w);
}

// ---------------------------------------------------------------------------
// Moves

enum class MoveKind {
  CoverDemand,     // put some eligible aircraft on (mission, period)
  RelieveCheck,    // move or drop a check covering (period) [of cluster]
  ReplanChecks,    // re-place the checks of (aircraft) along its calendar
  RestoreHours,    // add a check or hand a run away before (aircraft, period)
  BoostCluster,    // add a check for a member of (cluster) at (period)
  DropCheck,       // objective: remove a check
  DelayCheck,      // objective: move a check later
  Shuffle,         // diversification: release a random block
};

inline const char* move_name(MoveKind k) {
  switch (k) {
    case MoveKind::CoverDemand: return "CoverDemand";
    case MoveKind::RelieveCheck: return "RelieveCheck";
    case MoveKind::ReplanChecks: return "ReplanChecks";
    case MoveKind::RestoreHours: return "RestoreHours";
    case MoveKind::BoostCluster: return "BoostCluster";
    case MoveKind::DropCheck: return "DropCheck";
    case MoveKind::DelayCheck: return "DelayCheck";
    case MoveKind::Shuffle: return "Shuffle";
  }
  return "?";
}

struct Move {
  MoveKind kind = MoveKind::Shuffle;
  int aircraft = -1;
  int mission = -1;
  int period = 0;
  int cluster = -1;
};

/// One candidate per violation locus. A feasible report yields the
/// objective-improving kinds only.
inline std::vector<Move> candidate_moves(const ViolationReport& rep, const Instance& inst, const Solution& s) {
  std::vector<Move> out;
  for (const auto& v : rep.entries) {
    switch (v.family) {
      case Family::MissionReq: out.push_back({MoveKind::CoverDemand, -1, v.mission, v.period, -1}); break;
      case Family::Capacity: out.push_back({MoveKind::RelieveCheck, -1, -1, v.period, -1}); break;
      case Family::ClusterServ: out.push_back({MoveKind::RelieveCheck, -1, -1, v.period, v.cluster}); break;
      case Family::Calendar: out.push_back({MoveKind::ReplanChecks, v.aircraft, -1, v.period, -1}); break;
      case Family::Rft:
      case Family::FlightTime: out.push_back({MoveKind::RestoreHours, v.aircraft, -1, v.period, -1}); break;
      case Family::ClusterSust: out.push_back({MoveKind::BoostCluster, -1, -1, v.period, v.cluster}); break;
      case Family::State:
      case Family::MinAssign:
      case Family::InitialFix:
        out.push_back({MoveKind::Shuffle, v.aircraft, v.mission, std::max(1, v.period), -1});
        break;
    }
  }
  if (rep.feasible()) {
    for (int i = 0; i < s.num_aircraft(); ++i)
      for (int t = 1; t <= s.num_periods(); ++t)
        if (s.at(i, t).kind == CellKind::CheckStart) {
          out.push_back({MoveKind::DropCheck, i, -1, t, -1});
          out.push_back({MoveKind::DelayCheck, i, -1, t, -1});
        }
  }
  (void)inst;
  return out;
}

inline bool accept(double delta, double temperature, Rng& rng) {
  if (delta <= 0.0) return true;
  if (temperature <= 0.0) return false;
  return rng.uniform01() < std::exp(-delta / temperature);
}

// ---------------------------------------------------------------------------
// Block structure

struct Block {
  int first = 0;
  int last = 0;
  bool check = false;  // check block (start plus body) or initial maintenance
  int mission = -1;
  bool fixed = false;
};

class Planner {
 public:
  Planner(const Checker& chk) : chk_(chk), inst_(chk.instance()) {
    const int n = inst_.num_aircraft();
    fixed_.assign(n, std::vector<char>(inst_.num_periods() + 2, 0));
    for (int i = 0; i < n; ++i) {
      for (int t = 1; t <= std::min(inst_.fleet[i].in_maint_remaining, inst_.num_periods()); ++t) fixed_[i][t] = 1;
      if (const auto& run = chk.forced(i))
        for (int t : run->periods) fixed_[i][t] = 1;
    }
  }

  bool fixed(int i, int t) const { return fixed_[i][t]; }

  /// The block of row i covering t, if any.
  std::optional<Block> block_at(const Solution& s, int i, int t) const {
    const Cell& c = s.at(i, t);
    const int T = s.num_periods();
    const int M = inst_.params.check_duration;
    if (c.kind == CellKind::Free) return std::nullopt;
    if (c.kind == CellKind::Mission) {
      Block b{t, t, false, c.mission, false};
      while (b.first > 1 && s.at(i, b.first - 1) == c) --b.first;
      while (b.last < T && s.at(i, b.last + 1) == c) ++b.last;
      for (int q = b.first; q <= b.last; ++q) b.fixed |= fixed(i, q);
      return b;
    }
    if (t <= inst_.fleet[i].in_maint_remaining) return Block{1, std::min(T, inst_.fleet[i].in_maint_remaining), true, -1, true};
    int start = t;
    if (c.kind == CellKind::CheckBody) {
      while (start > 1 && start > t - M + 1 && s.at(i, start).kind == CellKind::CheckBody) --start;
      if (s.at(i, start).kind != CellKind::CheckStart) return Block{t, t, true, -1, false};  // orphan body cell
    }
    Block b{start, start, true, -1, false};
    while (b.last < T && b.last < start + M - 1 && s.at(i, b.last + 1).kind == CellKind::CheckBody) ++b.last;
    return b;
  }

  std::vector<Block> blocks(const Solution& s, int i) const {
    std::vector<Block> out;
    for (int t = 1; t <= s.num_periods();) {
      auto b = block_at(s, i, t);
      if (!b) {
        ++t;
        continue;
      }
      out.push_back(*b);
      t = b->last + 1;
    }
    return out;
  }

  /// Minimum last period of a run of j starting at a.
  int required_last(int j, int a, int i) const {
    const auto& m = inst_.missions[j];
    if (a == 1) {
      if (const auto& run = chk_.forced(i); run && run->mission == j) return 1;
      const auto& pre = inst_.fleet[i].preassigned;
      if (pre && chk_.sets().mission_index.at(pre->mission) == j) return 1;
    }
    return std::min(m.window.last, a + m.min_assign);
  }

  const Checker& checker() const { return chk_; }

 private:
  const Checker& chk_;
  const Instance& inst_;
  std::vector<std::vector<char>> fixed_;
};

// ---------------------------------------------------------------------------
// Search state

class Annealer {
 public:
  Annealer(const Instance& inst, const SaParams& params)
      : inst_(inst), params_(params), chk_(inst), plan_(chk_), w_(default_weights(inst)), rng_(params.seed) {
    const int n = inst.num_aircraft();
    const int T = inst.num_periods();
    HM_ = inst.params.flight_max;
    sol_ = Solution::blank(inst);
    sol_.u.assign(n, std::vector<double>(T, 0.0));
    sol_.rft.assign(n, std::vector<double>(T, 0.0));
    sol_.rct.assign(n, std::vector<int>(T, 0));
    ac_rep_.resize(n);
    ac_pen_.assign(n, 0.0);
    saved_.resize(n);
    touched_flag_.assign(n, 0);
  }

  const Solution& solution() const { return sol_; }
  double current_penalty() const { return total_; }
  bool current_feasible() const { return violations_ == 0; }

  // -- construction ---------------------------------------------------------

  void construct() {
    const int n = inst_.num_aircraft();
    for (int i = 0; i < n; ++i)
      if (const auto& run = chk_.forced(i))
        for (int t : run->periods) sol_.at(i, t) = Cell::on_mission(run->mission);
    for (int i = 0; i < n; ++i) refresh_row(i);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    rng_.shuffle(order);
    for (int i : order) {
      place_calendar_checks(i);
      refresh_row(i);
    }
    for (int t = 1; t <= inst_.num_periods(); ++t)
      for (int j : chk_.sets().missions_at[t]) cover(j, t, /*allow_release=*/false, 64);
    for (int i = 0; i < n; ++i) normalize(i);
    full_evaluate();
    commit();
  }

  // -- evaluation -----------------------------------------------------------

  void full_evaluate() {
    for (int i = 0; i < inst_.num_aircraft(); ++i) eval_aircraft(i);
    eval_coupling();
    sum_up();
  }

  // -- one iteration --------------------------------------------------------

  Move pick_move() {
    if (violations_ == 0) {
      std::vector<std::pair<int, int>> checks;
      for (int i = 0; i < inst_.num_aircraft(); ++i)
        for (int t = 1; t <= inst_.num_periods(); ++t)
          if (sol_.at(i, t).kind == CellKind::CheckStart) checks.push_back({i, t});
      if (checks.empty()) return {MoveKind::Shuffle, static_cast<int>(rng_.uniform_index(inst_.num_aircraft())), -1, 1, -1};
      const auto [i, t] = checks[rng_.uniform_index(checks.size())];
      return {rng_.bernoulli(0.5) ? MoveKind::DropCheck : MoveKind::DelayCheck, i, -1, t, -1};
    }
    if (rng_.bernoulli(params_.release_fraction * 0.5)) {
      const int i = static_cast<int>(rng_.uniform_index(inst_.num_aircraft()));
      return {MoveKind::Shuffle, i, -1, static_cast<int>(rng_.uniform_int(1, inst_.num_periods())), -1};
    }
    // Uniform over violation loci, which is uniform over candidates.
    std::size_t k = rng_.uniform_index(static_cast<std::size_t>(violations_));
    const Violation* v = nullptr;
    for (int i = 0; i < inst_.num_aircraft() && !v; ++i) {
      if (k < ac_rep_[i].size()) v = &ac_rep_[i].entries[k];
      else k -= ac_rep_[i].size();
    }
    if (!v) v = &coupling_rep_.entries[k];
    ViolationReport one;
    one.entries.push_back(*v);
    return candidate_moves(one, inst_, sol_).front();
  }

  /// Applies release and repair for the move; returns false (with the
  /// state untouched) when the move would disturb fixed cells.
  bool apply(const Move& mv) {
    begin_move();
    bool ok = false;
    switch (mv.kind) {
      case MoveKind::CoverDemand: ok = cover(mv.mission, mv.period, true, 8); break;
      case MoveKind::RelieveCheck: ok = relieve_check(mv); break;
      case MoveKind::ReplanChecks: ok = replan_checks(mv.aircraft); break;
      case MoveKind::RestoreHours: ok = restore_hours(mv.aircraft, mv.period); break;
      case MoveKind::BoostCluster: ok = boost_cluster(mv.cluster, mv.period); break;
      case MoveKind::DropCheck: ok = drop_check(mv.aircraft, mv.period, false); break;
      case MoveKind::DelayCheck: ok = drop_check(mv.aircraft, mv.period, true); break;
      case MoveKind::Shuffle: ok = shuffle(mv.aircraft, mv.period); break;
    }
    if (ok && mv.kind != MoveKind::Shuffle && rng_.bernoulli(params_.release_fraction)) {
      const int i = static_cast<int>(rng_.uniform_index(inst_.num_aircraft()));
      shuffle(i, static_cast<int>(rng_.uniform_int(1, inst_.num_periods())));
    }
    if (!ok || touched_.empty()) {
      rollback();
      return false;
    }
    for (int i : touched_) normalize(i);
    refill();
    for (int i : touched_) eval_aircraft(i);
    eval_coupling();
    sum_up();
    return true;
  }

  void commit() {
    end_touch();
    touched_.clear();
    released_.clear();
  }

  void rollback() {
    for (int i : touched_) {
      sol_.state[i] = saved_[i].state;
      sol_.u[i] = saved_[i].u;
      sol_.rft[i] = saved_[i].rft;
      sol_.rct[i] = saved_[i].rct;
      ac_rep_[i] = saved_[i].rep;
      ac_pen_[i] = saved_[i].pen;
      touched_flag_[i] = 0;
    }
    touched_.clear();
    released_.clear();
    coupling_rep_ = saved_coupling_;
    coupling_pen_ = saved_coupling_pen_;
    sum_up();
  }

  Rng& rng() { return rng_; }

 private:
  struct Saved {
    std::vector<Cell> state;
    std::vector<double> u, rft;
    std::vector<int> rct;
    ViolationReport rep;
    double pen = 0.0;
  };

  // -- bookkeeping ----------------------------------------------------------

  void begin_move() {
    touched_.clear();
    released_.clear();
    saved_coupling_ = coupling_rep_;
    saved_coupling_pen_ = coupling_pen_;
  }

  void touch(int i) {
    if (touched_flag_[i]) return;
    touched_flag_[i] = 1;
    touched_.push_back(i);
    saved_[i] = {sol_.state[i], sol_.u[i], sol_.rft[i], sol_.rct[i], ac_rep_[i], ac_pen_[i]};
  }

  void end_touch() {
    for (int i : touched_) touched_flag_[i] = 0;
  }

  void refresh_row(int i) { chk_.derive_row(sol_, i); }

  void eval_aircraft(int i) {
    refresh_row(i);
    ac_rep_[i].entries.clear();
    chk_.check_aircraft(sol_, i, ac_rep_[i]);
    const int T = inst_.num_periods();
    int checks = 0;
    for (const auto& c : sol_.state[i]) checks += c.kind == CellKind::CheckStart;
    double obj = checks;
    if (params_.objective == ObjectiveKind::MinChecksMaxRft) obj = checks * HM_ - (T > 0 ? sol_.rft[i][T - 1] : 0.0);
    ac_pen_[i] = weighted_violations(ac_rep_[i], w_) + scaled_objective(inst_, obj, params_.objective, w_);
  }

  void eval_coupling() {
    coupling_rep_.entries.clear();
    chk_.check_coupling(sol_, coupling_rep_);
    coupling_pen_ = weighted_violations(coupling_rep_, w_);
  }

  void sum_up() {
    total_ = coupling_pen_;
    violations_ = static_cast<long>(coupling_rep_.size());
    for (int i = 0; i < inst_.num_aircraft(); ++i) {
      total_ += ac_pen_[i];
      violations_ += static_cast<long>(ac_rep_[i].size());
    }
  }

  // -- primitive edits ------------------------------------------------------

  // Frees every block of row i meeting [a, b]. Fails on fixed blocks unless
  // they are runs of `keep_mission`, which are left in place.
  bool release_span(int i, int a, int b, int keep_mission = -1) {
    const int T = inst_.num_periods();
    a = std::max(1, a);
    b = std::min(T, b);
    std::vector<Block> hit;
    for (int t = a; t <= b;) {
      auto blk = plan_.block_at(sol_, i, t);
      if (!blk) {
        ++t;
        continue;
      }
      if (!(blk->mission >= 0 && blk->mission == keep_mission)) {
        if (blk->fixed) return false;
        hit.push_back(*blk);
      }
      t = blk->last + 1;
    }
    touch(i);
    for (const auto& blk : hit) free_block(i, blk);
    return true;
  }

  void free_block(int i, const Block& blk) {
    touch(i);
    for (int t = blk.first; t <= blk.last; ++t) {
      const Cell c = sol_.at(i, t);
      if (c.kind == CellKind::Mission) released_.push_back({c.mission, t});
      sol_.at(i, t) = Cell::free();
    }
  }

  bool can_place_check(int i, int s) const {
    const int T = inst_.num_periods();
    if (s < 1 || s > T || inst_.params.check_duration <= 0) return false;
    for (int t = s; t <= std::min(T, s + inst_.params.check_duration - 1); ++t)
      if (plan_.fixed(i, t)) return false;
    return true;
  }

  bool place_check(int i, int s) {
    if (!can_place_check(i, s)) return false;
    if (!release_span(i, s, s + inst_.params.check_duration - 1)) return false;
    sol_.place_check(i, s, inst_.params.check_duration);
    return true;
  }

  // Started-window check load at t with the fleet (or a cluster) as is.
  int check_load(int t, int cluster = -1) const {
    int busy = 0;
    if (cluster < 0) {
      busy = inst_.params.known_in_maintenance(t);
      for (int i = 0; i < inst_.num_aircraft(); ++i) busy += chk_.starts_covering(sol_, i, t);
    } else {
      busy = inst_.clusters[cluster].known_in_maint[t - 1];
      for (int i : chk_.sets().members[cluster]) busy += chk_.starts_covering(sol_, i, t);
    }
    return busy;
  }

  // Whether a check starting at s fits under the fleet capacity.
  bool capacity_room(int s, int exclude_aircraft = -1) const {
    const int T = inst_.num_periods();
    for (int t = s; t <= std::min(T, s + inst_.params.check_duration - 1); ++t) {
      int busy = check_load(t);
      if (exclude_aircraft >= 0) busy -= chk_.starts_covering(sol_, exclude_aircraft, t);
      if (busy + 1 > inst_.params.capacity) return false;
    }
    return true;
  }

  // Random start in [lo, hi], preferring starts with capacity room.
  int pick_start(int i, int lo, int hi) {
    lo = std::max(1, lo);
    hi = std::min(inst_.num_periods(), hi);
    if (lo > hi) return -1;
    std::vector<int> room, any;
    for (int s = lo; s <= hi; ++s) {
      if (!can_place_check(i, s)) continue;
      any.push_back(s);
      if (capacity_room(s, i)) room.push_back(s);
    }
    const auto& pool = room.empty() ? any : room;
    if (pool.empty()) return -1;
    return pool[rng_.uniform_index(pool.size())];
  }

  // Whether a run of j on row i over [a, b] can be laid without releasing
  // anything except runs of j itself.
  bool span_free(int i, int a, int b, int j) const {
    for (int t = a; t <= b; ++t) {
      const Cell& c = sol_.at(i, t);
      if (c.kind == CellKind::Free) continue;
      if (c.kind == CellKind::Mission && c.mission == j) continue;
      return false;
    }
    return true;
  }

  // Periods [a, b] a new assignment of j on row i must cover to include t.
  std::pair<int, int> run_span(int i, int j, int t) const {
    const auto& m = inst_.missions[j];
    if (t > m.window.first && sol_.at(i, t - 1) == Cell::on_mission(j)) return {t, t};
    if (t < m.window.last && sol_.at(i, t + 1) == Cell::on_mission(j)) return {t, t};
    return {t, plan_.required_last(j, t, i)};
  }

  int coverage(int j, int t) const {
    int have = 0;
    for (int i : chk_.sets().eligible[j]) have += chk_.assigned(sol_, j, t, i);
    return have;
  }

  // -- moves ----------------------------------------------------------------

  // Puts one more aircraft on (j, t). Without release only aircraft whose
  // span is free are used; tries up to `tries` aircraft.
  bool cover(int j, int t, bool allow_release, int tries) {
    const auto& m = inst_.missions[j];
    if (!m.window.contains(t)) return false;
    bool any = false;
    while (coverage(j, t) < m.required && tries-- > 0) {
      struct Cand {
        int i, a, b;
        double w;
      };
      std::vector<Cand> cands;
      double total = 0.0;
      for (int i : chk_.sets().eligible[j]) {
        if (chk_.assigned(sol_, j, t, i)) continue;
        const auto [a, b] = run_span(i, j, t);
        const bool free = span_free(i, a, b, j);
        if (!free && !allow_release) continue;
        bool fixed = false;
        for (int q = a; q <= b; ++q) fixed |= plan_.fixed(i, q) && !(sol_.at(i, q) == Cell::on_mission(j));
        if (fixed) continue;
        const double rft = sol_.rft[i][t - 1];
        double w = (free ? 6.0 : 1.0) * (a == b ? 2.0 : 1.0) * (0.05 + std::max(0.0, rft) / std::max(1.0, HM_));
        if (HM_ <= 0) w = free ? 6.0 : 1.0;
        if (rft - m.hours * (b - a + 1) < 0 && HM_ > 0) w *= 0.2;
        cands.push_back({i, a, b, w});
        total += w;
      }
      if (cands.empty()) return any;
      double r = rng_.uniform01() * total;
      const Cand* pick = &cands.back();
      for (const auto& c : cands) {
        if (r < c.w) {
          pick = &c;
          break;
        }
        r -= c.w;
      }
      if (!release_span(pick->i, pick->a, pick->b, j)) return any;
      for (int q = pick->a; q <= pick->b; ++q) sol_.at(pick->i, q) = Cell::on_mission(j);
      refresh_row(pick->i);
      any = true;
    }
    return any;
  }

  // Aircraft with a check started in the window of t (of a cluster).
  bool relieve_check(const Move& mv) {
    std::vector<std::pair<int, int>> holders;  // (aircraft, start)
    auto consider = [&](int i) {
      for (int s : started_window(mv.period, inst_.params))
        if (sol_.at(i, s).kind == CellKind::CheckStart) holders.push_back({i, s});
    };
    if (mv.cluster >= 0)
      for (int i : chk_.sets().members[mv.cluster]) consider(i);
    else
      for (int i = 0; i < inst_.num_aircraft(); ++i) consider(i);
    if (holders.empty()) return false;
    const auto [i, s] = holders[rng_.uniform_index(holders.size())];
    const auto blk = plan_.block_at(sol_, i, s);
    free_block(i, *blk);
    if (rng_.bernoulli(0.8)) {
      const int M = inst_.params.check_duration;
      const int span = M + 6;
      int lo = s - span, hi = s + span;
      const auto& init = chk_.initial(i);
      if (init.forces_check && init.must_check.contains(s)) {
        lo = init.must_check.first;
        hi = init.must_check.last;
      }
      for (int tries = 0; tries < 4; ++tries) {
        const int s2 = pick_start(i, lo, hi);
        if (s2 < 0) break;
        if (s2 <= mv.period && s2 + M - 1 >= mv.period) continue;
        place_check(i, s2);
        break;
      }
    }
    refresh_row(i);
    return true;
  }

  // Checks along the calendar: the initial window, then chained windows.
  void place_calendar_checks(int i) {
    const auto& init = chk_.initial(i);
    const int T = inst_.num_periods();
    int s = -1;
    if (init.forces_check) {
      s = pick_start(i, init.must_check.first, init.must_check.last);
      if (s > 0) place_check(i, s);
    }
    while (s > 0 && window_sets(s, inst_.params).forces_next) {
      const auto next = window_sets(s, inst_.params).next_check;
      // Strictly later, or a window holding s itself would never advance.
      s = pick_start(i, std::max(next.first, s + std::max(1, inst_.params.check_duration)), next.last);
      if (s > 0) place_check(i, s);
    }
    (void)T;
  }

  bool replan_checks(int i) {
    if (i < 0) return false;
    for (const auto& blk : plan_.blocks(sol_, i))
      if (blk.check && !blk.fixed) free_block(i, blk);
    touch(i);
    place_calendar_checks(i);
    // Keep a flight-hour check when the calendar chain placed none.
    refresh_row(i);
    const int T = inst_.num_periods();
    for (int t = 1; t <= T; ++t)
      if (sol_.rft[i][t - 1] < -kFeasTol) {
        add_check_before(i, t);
        break;
      }
    refresh_row(i);
    return true;
  }

  // Earliest start after the last check of i that is at or before t.
  void add_check_before(int i, int t) {
    const int M = inst_.params.check_duration;
    const int gap = M + inst_.params.calendar_min;
    int lo = std::max(1, t - 2 * M);
    for (int q = t; q >= 1; --q)
      if (sol_.at(i, q).kind == CellKind::CheckStart) {
        lo = std::max(lo, q + gap);
        break;
      }
    lo = std::max(lo, chk_.initial(i).no_check.empty() ? 1 : chk_.initial(i).no_check.last + 1);
    const int s = pick_start(i, lo, t);
    if (s > 0) place_check(i, s);
  }

  bool restore_hours(int i, int t) {
    if (i < 0) return false;
    touch(i);
    if (rng_.bernoulli(0.5)) {
      add_check_before(i, t);
    } else {
      // Hand a mission run at or before t to someone else.
      std::vector<Block> runs;
      for (const auto& blk : plan_.blocks(sol_, i))
        if (!blk.check && !blk.fixed && blk.first <= t) runs.push_back(blk);
      if (runs.empty()) {
        add_check_before(i, t);
      } else {
        const auto blk = runs[rng_.uniform_index(runs.size())];
        free_block(i, blk);
        refresh_row(i);
        for (int q = blk.first; q <= blk.last; ++q) cover(blk.mission, q, false, 4);
      }
    }
    refresh_row(i);
    return true;
  }

  bool boost_cluster(int k, int t) {
    if (k < 0) return false;
    const auto& members = chk_.sets().members[k];
    if (members.empty()) return false;
    // Lower remaining hours make a better candidate.
    std::vector<double> w;
    double total = 0.0;
    for (int i : members) {
      double x = HM_ > 0 ? 1.05 - std::clamp(sol_.rft[i][t - 1] / HM_, 0.0, 1.0) : 1.0;
      if (sol_.at(i, t).is_check()) x = 0.01;
      w.push_back(x);
      total += x;
    }
    double r = rng_.uniform01() * total;
    int i = members.back();
    for (std::size_t q = 0; q < members.size(); ++q) {
      if (r < w[q]) {
        i = members[q];
        break;
      }
      r -= w[q];
    }
    touch(i);
    const int s = pick_start(i, t - inst_.params.check_duration - 2, t);
    if (s < 0) return false;
    place_check(i, s);
    refresh_row(i);
    return true;
  }

  bool drop_check(int i, int s, bool delay) {
    if (i < 0 || sol_.at(i, s).kind != CellKind::CheckStart) return false;
    const auto blk = plan_.block_at(sol_, i, s);
    if (!blk || blk->fixed) return false;
    free_block(i, *blk);
    if (delay) {
      const int s2 = pick_start(i, s + 1, s + 1 + static_cast<int>(rng_.uniform_int(0, 6)));
      if (s2 < 0) return false;
      place_check(i, s2);
    }
    refresh_row(i);
    return true;
  }

  bool shuffle(int i, int t) {
    if (i < 0) return false;
    auto blk = plan_.block_at(sol_, i, t);
    if (!blk) {
      // Start an assignment here instead when some mission is short.
      for (int j : chk_.sets().options[i])
        if (inst_.missions[j].window.contains(t) && coverage(j, t) < inst_.missions[j].required) return cover(j, t, true, 1);
      return false;
    }
    if (blk->fixed) return false;
    free_block(i, *blk);
    refresh_row(i);
    if (!blk->check)
      for (int q = blk->first; q <= blk->last; ++q) cover(blk->mission, q, false, 2);
    return true;
  }

  // -- repair helpers -------------------------------------------------------

  // Drops runs that fall short of their minimum assignment and orphan body
  // cells.
  void normalize(int i) {
    for (const auto& blk : plan_.blocks(sol_, i)) {
      if (blk.fixed) continue;
      if (blk.check) {
        if (sol_.at(i, blk.first).kind != CellKind::CheckStart) free_block(i, blk);
        continue;
      }
      if (blk.last < plan_.required_last(blk.mission, blk.first, i)) free_block(i, blk);
    }
    refresh_row(i);
  }

  // Re-covers demand uncovered by released mission cells, using free spans.
  void refill() {
    auto cells = released_;
    released_.clear();
    for (const auto& [j, t] : cells)
      if (coverage(j, t) < inst_.missions[j].required) cover(j, t, false, 3);
    for (int i : touched_) normalize(i);
  }

 private:
  const Instance& inst_;
  SaParams params_;
  Checker chk_;
  Planner plan_;
  PenaltyWeights w_;
  Rng rng_;
  double HM_ = 0.0;
  Solution sol_;
  std::vector<ViolationReport> ac_rep_;
  std::vector<double> ac_pen_;
  ViolationReport coupling_rep_, saved_coupling_;
  double coupling_pen_ = 0.0, saved_coupling_pen_ = 0.0;
  double total_ = 0.0;
  long violations_ = 0;
  std::vector<Saved> saved_;
  std::vector<int> touched_;
  std::vector<char> touched_flag_;
  std::vector<std::pair<int, int>> released_;
};

// ---------------------------------------------------------------------------
// Driver

struct SaResult {
  Solution solution;
  SearchTrace trace;
  double penalty = 0.0;
  bool feasible = false;
};

/// Temperature giving the target mean acceptance over the sampled deltas.
inline double calibrate_temperature(const std::vector<double>& deltas, double target) {
  std::vector<double> up;
  for (double d : deltas)
    if (d > 0) up.push_back(d);
  if (deltas.empty() || up.empty()) return 1.0;
  const double n = static_cast<double>(deltas.size());
  const double down = n - static_cast<double>(up.size());
  auto rate = [&](double temp) {
    double a = down;
    for (double d : up) a += std::exp(-d / temp);
    return a / n;
  };
  if (down / n >= target) return *std::min_element(up.begin(), up.end());
  double lo = 1e-9, hi = 1.0;
  while (rate(hi) < target && hi < 1e12) hi *= 2.0;
  for (int k = 0; k < 100; ++k) {
    const double mid = std::sqrt(lo * hi);
    (rate(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

inline SaResult sa_solve(const Instance& inst, const SaParams& params) {
  validate_params(params);
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  Annealer ann(inst, params);
  ann.construct();
  SaResult res;
  res.solution = ann.solution();
  res.penalty = ann.current_penalty();
  res.feasible = ann.current_feasible();
  res.trace.best_penalty.push_back({0, res.penalty});
  if (res.feasible) res.trace.first_feasible = 0;

  auto step = [&](const Move& mv) {
    const double before = ann.current_penalty();
    if (!ann.apply(mv)) return std::optional<double>{};
    return std::optional<double>{ann.current_penalty() - before};
  };

  // Temperature at which the mean acceptance over 100 sample moves is 0.8.
  double temp = params.initial_temperature;
  if (temp <= 0.0) {
    std::vector<double> deltas;
    for (int k = 0; k < 100; ++k) {
      const auto d = step(ann.pick_move());
      if (!d) continue;
      deltas.push_back(*d);
      ann.rollback();
    }
    temp = calibrate_temperature(deltas, 0.8);
  }
  res.trace.initial_temperature = temp;
  const double t_start = temp;
  const double t_floor = t_start * 1e-3;

  long it = 0;
  res.trace.outcome = SearchOutcome::IterLimit;
  for (; it < params.iter_limit; ++it) {
    if (res.feasible && params.stop_on_feasible) {
      res.trace.outcome = SearchOutcome::Feasible;
      break;
    }
    if ((it & 63) == 0 && elapsed() > params.time_limit) {
      res.trace.outcome = SearchOutcome::TimeLimit;
      break;
    }
    const auto d = step(ann.pick_move());
    if (d) {
      if (accept(*d, temp, ann.rng())) {
        ann.commit();
        ++res.trace.accepted;
      } else {
        ann.rollback();
      }
      if (ann.current_penalty() < res.penalty - 1e-12) {
        res.penalty = ann.current_penalty();
        res.solution = ann.solution();
        res.feasible = ann.current_feasible();
        res.trace.best_penalty.push_back({it + 1, res.penalty});
        if (res.feasible && res.trace.first_feasible < 0) res.trace.first_feasible = it + 1;
      }
    }
    temp *= params.cooling_rate;
    if (temp < t_floor) temp = t_start;
  }
  if (res.feasible && (params.stop_on_feasible || res.trace.outcome == SearchOutcome::IterLimit))
    res.trace.outcome = res.trace.outcome == SearchOutcome::TimeLimit ? SearchOutcome::TimeLimit : SearchOutcome::Feasible;
  res.trace.iterations = it;
  res.trace.wall_time = elapsed();
  // The validator is the final word.
  res.feasible = check_solution(inst, res.solution).feasible();
  if (!res.feasible && res.trace.outcome == SearchOutcome::Feasible) res.trace.outcome = SearchOutcome::IterLimit;
  return res;
}

/// Independent restarts with seeds split from params.seed, run on up to
/// `workers` threads; the lowest penalty wins (ties to the lower index).
inline SaResult sa_solve_restarts(const Instance& inst, const SaParams& params, int restarts, int workers) {
  restarts = std::max(1, restarts);
  workers = std::clamp(workers, 1, restarts);
  std::vector<SaResult> results(restarts);
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < restarts; r = next++) {
      SaParams p = params;
      p.seed = Rng(params.seed).split(static_cast<std::uint64_t>(r)).next();
      results[r] = sa_solve(inst, p);
    }
  };
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  int best = 0;
  for (int r = 1; r < restarts; ++r)
    if (results[r].penalty < results[best].penalty) best = r;
  return results[best];
}

/// Writes the solution as "name value" lines for an external solver.
/// Infeasible solutions are refused unless `nearly_feasible` is set.
inline void export_warm_start(std::ostream& out, const Instance& inst, const Solution& sol, ObjectiveKind kind,
                              bool nearly_feasible = false) {
  Solution s = sol;
  derive_usage(inst, s);
  const auto rep = check_solution(inst, s);
  if (!rep.feasible() && !nearly_feasible)
    throw DomainError("warm start is infeasible (" + std::to_string(rep.size()) + " violations)");
  const auto model = mip::build_fixed_model(inst, kind);
  const auto x = mip::encode_solution(model, inst, s);
  if (!rep.feasible()) out << "# nearly feasible: " << rep.size() << " violations\n";
  mip::write_values(out, model, x, true);
}

}  // namespace fmp
