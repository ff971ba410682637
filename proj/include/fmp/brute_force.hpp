#pragma once

// Exhaustive optimum for tiny instances.
//
// Each aircraft's row is enumerated independently (cells Free, a mission
// option, or a check block), filtered through the per-aircraft constraints,
// and the surviving rows are combined by depth-first search with bounds on
// the fleet-level constraints and the objective.

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "validator.hpp"

namespace fmp {

struct SizeGuardError : std::length_error {
  using std::length_error::length_error;
};

struct BruteForceLimits {
  int max_aircraft = 3;
  int max_periods = 8;
};

struct BruteForceResult {
  bool feasible = false;
  double value = std::numeric_limits<double>::infinity();
  Solution solution;
  std::size_t rows_enumerated = 0;
  std::size_t rows_feasible = 0;
  std::size_t nodes = 0;
};

namespace bf_detail {

struct Row {
  std::vector<Cell> cells;
  std::vector<double> rft;
  std::vector<int> busy;  // started-window coverage per period
  int checks = 0;
  double value = 0.0;
};

class RowEnumerator {
 public:
  RowEnumerator(const Checker& chk, int i, ObjectiveKind kind)
      : chk_(chk), inst_(chk.instance()), i_(i), kind_(kind), scratch_(inst_.num_aircraft(), inst_.num_periods()) {
    scratch_.u.assign(inst_.num_aircraft(), std::vector<double>(inst_.num_periods(), 0.0));
    scratch_.rft.assign(inst_.num_aircraft(), std::vector<double>(inst_.num_periods(), 0.0));
    scratch_.rct.assign(inst_.num_aircraft(), std::vector<int>(inst_.num_periods(), 0));
    if (const auto& run = chk.forced(i))
      for (int t : run->periods) forced_[t] = run->mission;
  }

  std::vector<Row> run(std::size_t& enumerated) {
    visit(1);
    enumerated += enumerated_;
    return std::move(rows_);
  }

 private:
  Cell& cell(int t) { return scratch_.at(i_, t); }

  // Mission that must continue at t because a run started within its
  // minimum-assignment window; -1 if none, -2 on conflict.
  int required_mission(int t) {
    int need = -1;
    for (int j : chk_.sets().options[i_]) {
      const auto& m = inst_.missions[j];
      if (!m.window.contains(t)) continue;
      for (int q = std::max(m.window.first, t - m.min_assign); q < t; ++q) {
        if (chk_.assignment_start(scratch_, j, q, i_)) {
          if (need >= 0 && need != j) return -2;
          need = j;
        }
      }
    }
    return need;
  }

  bool prefix_ok(int t) {
    const auto& p = inst_.params;
    double rft = t == 1 ? inst_.fleet[i_].rft_init : rft_[t - 1];
    const Cell& c = cell(t);
    const int checks = chk_.starts_covering(scratch_, i_, t);
    double u = 0.0;
    if (c.kind == CellKind::Mission) u = inst_.missions[c.mission].hours;
    if (t > inst_.fleet[i_].in_maint_remaining) u = std::max(u, p.default_usage * (1 - checks));
    rft = std::min(p.flight_max, rft + p.flight_max * (c.kind == CellKind::CheckStart) - u);
    if (rft < -kFeasTol) return false;
    if (static_cast<int>(rft_.size()) <= t) rft_.resize(t + 1);
    rft_[t] = rft;
    return true;
  }

  void visit(int t) {
    const int T = inst_.num_periods();
    if (t > T) {
      finish();
      return;
    }
    const auto& p = inst_.params;
    const int nm = inst_.fleet[i_].in_maint_remaining;
    if (t <= nm || cell(t).kind == CellKind::CheckBody) {
      const Cell keep = cell(t);
      if (t <= nm) cell(t) = Cell::check_body();
      if (prefix_ok(t)) visit(t + 1);
      cell(t) = keep;
      return;
    }
    const int need = required_mission(t);
    if (need == -2) return;
    auto forced = forced_.find(t);
    std::vector<Cell> choices;
    if (forced != forced_.end()) {
      if (need >= 0 && need != forced->second) return;
      choices.push_back(Cell::on_mission(forced->second));
    } else if (need >= 0) {
      choices.push_back(Cell::on_mission(need));
    } else {
      choices.push_back(Cell::free());
      for (int j : chk_.sets().options[i_])
        if (inst_.missions[j].window.contains(t)) choices.push_back(Cell::on_mission(j));
      if (p.check_duration > 0) choices.push_back(Cell::check_start());
    }
    for (const Cell& c : choices) {
      if (c.kind == CellKind::CheckStart) {
        const int last = std::min(T, t + p.check_duration - 1);
        bool blocked = false;
        for (int q = t + 1; q <= last; ++q) blocked |= forced_.count(q) > 0;
        if (blocked) continue;
        scratch_.place_check(i_, t, p.check_duration);
        if (prefix_ok(t)) visit(t + 1);
        for (int q = t; q <= last; ++q) cell(q) = Cell::free();
      } else {
        cell(t) = c;
        if (prefix_ok(t)) visit(t + 1);
        cell(t) = Cell::free();
      }
    }
  }

  void finish() {
    ++enumerated_;
    chk_.derive_row(scratch_, i_);
    ViolationReport rep;
    chk_.check_aircraft(scratch_, i_, rep);
    if (!rep.feasible()) return;
    const int T = inst_.num_periods();
    Row r;
    r.cells = scratch_.state[i_];
    r.rft = scratch_.rft[i_];
    r.busy.resize(T);
    for (int t = 1; t <= T; ++t) r.busy[t - 1] = chk_.starts_covering(scratch_, i_, t);
    for (const auto& c : r.cells) r.checks += c.kind == CellKind::CheckStart;
    r.value = r.checks;
    if (kind_ == ObjectiveKind::MinChecksMaxRft)
      r.value = r.checks * inst_.params.flight_max - (T > 0 ? r.rft[T - 1] : 0.0);
    rows_.push_back(std::move(r));
  }

  const Checker& chk_;
  const Instance& inst_;
  int i_;
  ObjectiveKind kind_;
  Solution scratch_;
  std::map<int, int> forced_;
  std::vector<double> rft_;
  std::vector<Row> rows_;
  std::size_t enumerated_ = 0;
};

}  // namespace bf_detail

/// Global optimum by exhaustive search. Throws SizeGuardError when the
/// instance exceeds the limits.
inline BruteForceResult brute_force_solve(const Instance& inst, ObjectiveKind kind, BruteForceLimits limits = {}) {
  const int n = inst.num_aircraft();
  const int T = inst.num_periods();
  if (n > limits.max_aircraft || T > limits.max_periods)
    throw SizeGuardError("instance too large for brute force: |I|=" + std::to_string(n) + ", |T|=" + std::to_string(T) +
                         " (limits |I|<=" + std::to_string(limits.max_aircraft) +
                         ", |T|<=" + std::to_string(limits.max_periods) + ")");
  const Checker chk(inst);
  const auto& sets = chk.sets();
  BruteForceResult res;
  res.solution = Solution(n, T);

  std::vector<std::vector<bf_detail::Row>> rows(n);
  for (int i = 0; i < n; ++i) {
    rows[i] = bf_detail::RowEnumerator(chk, i, kind).run(res.rows_enumerated);
    res.rows_feasible += rows[i].size();
    if (rows[i].empty()) return res;
    std::stable_sort(rows[i].begin(), rows[i].end(),
                     [](const bf_detail::Row& a, const bf_detail::Row& b) { return a.value < b.value; });
  }

  // Optimistic completions for the aircraft after position k.
  const int J = inst.num_missions();
  std::vector<double> lb_suffix(n + 1, 0.0);
  for (int i = n - 1; i >= 0; --i) lb_suffix[i] = lb_suffix[i + 1] + rows[i].front().value;
  // cover_suffix[k][j][t-1]: aircraft >= k that have some row covering (j, t)
  std::vector<std::vector<std::vector<int>>> cover_suffix(n + 1, std::vector<std::vector<int>>(J, std::vector<int>(T, 0)));
  // rft_suffix[k][c][t-1]: best attainable rft sum of cluster c members >= k
  const int K = static_cast<int>(inst.clusters.size());
  std::vector<std::vector<std::vector<double>>> rft_suffix(n + 1, std::vector<std::vector<double>>(K, std::vector<double>(T, 0.0)));
  for (int i = n - 1; i >= 0; --i) {
    cover_suffix[i] = cover_suffix[i + 1];
    rft_suffix[i] = rft_suffix[i + 1];
    for (int t = 1; t <= T; ++t) {
      std::vector<char> covers(J, 0);
      double best_rft = -std::numeric_limits<double>::infinity();
      for (const auto& r : rows[i]) {
        const Cell& c = r.cells[t - 1];
        if (c.kind == CellKind::Mission) covers[c.mission] = 1;
        best_rft = std::max(best_rft, r.rft[t - 1]);
      }
      for (int j = 0; j < J; ++j) cover_suffix[i][j][t - 1] += covers[j];
      for (int k : sets.clusters_of[i]) rft_suffix[i][k][t - 1] += best_rft;
    }
  }

  std::vector<int> cap_left(T), cover(J * T, 0);
  for (int t = 1; t <= T; ++t) cap_left[t - 1] = inst.params.capacity - inst.params.known_in_maintenance(t);
  std::vector<std::vector<int>> cl_left(K, std::vector<int>(T));
  std::vector<std::vector<double>> cl_rft(K, std::vector<double>(T, 0.0));
  for (int k = 0; k < K; ++k)
    for (int t = 1; t <= T; ++t) cl_left[k][t - 1] = inst.clusters[k].maint_cap[t - 1] - inst.clusters[k].known_in_maint[t - 1];
  std::vector<int> pick(n, -1);
  Solution cand(n, T);

  auto partial_ok = [&](int next) {
    for (int t = 0; t < T; ++t)
      if (cap_left[t] < 0) return false;
    for (int k = 0; k < K; ++k)
      for (int t = 0; t < T; ++t) {
        if (cl_left[k][t] < 0) return false;
        if (cl_rft[k][t] + rft_suffix[next][k][t] < inst.clusters[k].sustain_floor[t] - kFeasTol) return false;
      }
    for (int j = 0; j < J; ++j)
      for (int t : inst.missions[j].window)
        if (cover[j * T + t - 1] + cover_suffix[next][j][t - 1] < inst.missions[j].required) return false;
    return true;
  };

  auto apply = [&](int i, const bf_detail::Row& r, int sign) {
    for (int t = 0; t < T; ++t) {
      cap_left[t] -= sign * r.busy[t];
      const Cell& c = r.cells[t];
      if (c.kind == CellKind::Mission) cover[c.mission * T + t] += sign;
      for (int k : sets.clusters_of[i]) {
        cl_left[k][t] -= sign * r.busy[t];
        cl_rft[k][t] += sign * r.rft[t];
      }
    }
  };

  auto dfs = [&](auto&& self, int i, double value) -> void {
    ++res.nodes;
    if (i == n) {
      for (int q = 0; q < n; ++q) cand.state[q] = rows[q][pick[q]].cells;
      chk.derive(cand);
      if (!chk.check(cand).feasible()) return;
      const double v = objective(inst, cand, kind);
      if (!res.feasible || v < res.value) {
        res.feasible = true;
        res.value = v;
        res.solution = cand;
      }
      return;
    }
    for (std::size_t r = 0; r < rows[i].size(); ++r) {
      const auto& row = rows[i][r];
      if (res.feasible && value + row.value + lb_suffix[i + 1] >= res.value - 1e-9) break;
      apply(i, row, 1);
      pick[i] = static_cast<int>(r);
      if (partial_ok(i + 1)) self(self, i + 1, value + row.value);
      apply(i, row, -1);
    }
  };
  if (partial_ok(0)) dfs(dfs, 0, 0.0);
  return res;
}

}  // namespace fmp
