#pragma once

// Exact MIP for flight and maintenance planning, built as a MatrixModel.
//
// Variables (periods 1-based, aircraft/mission indices 0-based):
//   a_<j>_<t>_<i>   aircraft i flies mission j in period t      (binary)
//   as_<j>_<t>_<i>  aircraft i starts a run of mission j at t    (binary)
//   m_<i>_<t>       aircraft i starts a check at t               (binary)
//   u_<i>_<t>       flight hours of aircraft i in period t       (continuous)
//   rft_<i>_<t>     remaining flight hours at the end of t       (continuous)
//
// Row families, in emission order:
//   cap      checks in progress + known maintenance <= C_max
//   req      mission coverage >= R_j
//   state    one mission or one check per aircraft and period
//   start    run-start detection (t = 1 uses the preassignment indicator)
//   mtime    minimum consecutive assignment
//   clserv   cluster checks in progress <= A^K
//   clsust   cluster remaining flight time >= H^K
//   fly      u >= mission hours
//   fmin     u >= U_min unless in check (omitted when U_min = 0, and for
//            periods an aircraft spends finishing an initial check)
//   rftdyn   rft_t <= rft_{t-1} + H_M m_t - u_t
//   rftchk   rft_t >= H_M * (checks in progress)
//   calmin   at most one check start within T^m_t
//   calmax   a check at t needs a follow-up check in T^M_t
//   calmini  no check start inside T^{m_ini}_i
//   calmaxi  a check start inside T^{M_ini}_i
//
// Rows that every binary point satisfies (a single binary <= 1, all-zero
// left-hand sides with a satisfied constant) are not emitted.

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "model.hpp"
#include "validator.hpp"

namespace fmp {

struct ExtractionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace mip {

enum class VarFamily { Assign, Start, Check, Usage, Rft };

struct VarTag {
  VarFamily family;
  int aircraft = -1;
  int mission = -1;
  int period = 0;
};

inline std::string assign_name(int j, int t, int i) {
  return "a_" + std::to_string(j) + "_" + std::to_string(t) + "_" + std::to_string(i);
}
inline std::string start_name(int j, int t, int i) {
  return "as_" + std::to_string(j) + "_" + std::to_string(t) + "_" + std::to_string(i);
}
inline std::string check_name(int i, int t) { return "m_" + std::to_string(i) + "_" + std::to_string(t); }
inline std::string usage_name(int i, int t) { return "u_" + std::to_string(i) + "_" + std::to_string(t); }
inline std::string rft_name(int i, int t) { return "rft_" + std::to_string(i) + "_" + std::to_string(t); }

/// Inverse of the *_name functions.
inline std::optional<VarTag> parse_var_name(std::string_view name) {
  std::vector<int> nums;
  auto us = name.find('_');
  if (us == std::string_view::npos) return std::nullopt;
  const auto prefix = name.substr(0, us);
  auto rest = name.substr(us + 1);
  while (!rest.empty()) {
    const auto next = rest.find('_');
    const auto tok = rest.substr(0, next);
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size() || tok.empty()) return std::nullopt;
    nums.push_back(v);
    if (next == std::string_view::npos) break;
    rest = rest.substr(next + 1);
  }
  if ((prefix == "a" || prefix == "as") && nums.size() == 3)
    return VarTag{prefix == "a" ? VarFamily::Assign : VarFamily::Start, nums[2], nums[0], nums[1]};
  if (nums.size() != 2) return std::nullopt;
  if (prefix == "m") return VarTag{VarFamily::Check, nums[0], -1, nums[1]};
  if (prefix == "u") return VarTag{VarFamily::Usage, nums[0], -1, nums[1]};
  if (prefix == "rft") return VarTag{VarFamily::Rft, nums[0], -1, nums[1]};
  return std::nullopt;
}

namespace detail {

inline std::string idx(std::initializer_list<int> parts) {
  std::string s;
  for (int p : parts) s += "_" + std::to_string(p);
  return s;
}

// Adds a row, dropping zero coefficients. Empty rows are kept only when
// their constant comparison fails (structural infeasibility).
inline void emit(MatrixModel& model, std::string name, std::vector<Term> terms, Sense sense, double rhs) {
  std::erase_if(terms, [](const Term& t) { return t.coef == 0.0; });
  if (terms.empty()) {
    const bool ok = sense == Sense::Le ? 0.0 <= rhs : sense == Sense::Ge ? 0.0 >= rhs : rhs == 0.0;
    if (ok) return;
    if (model.num_vars() == 0) throw ModelError("row " + name + " is infeasible and the model has no columns");
    terms.push_back({0, 0.0});
  }
  model.add_row(std::move(name), std::move(terms), sense, rhs);
}

}  // namespace detail

/// Builds the model without initial-condition fixings.
inline MatrixModel build_model(const Instance& inst, ObjectiveKind kind) {
  const auto sets = derive_index_sets(inst);
  const auto& p = inst.params;
  const int T = inst.num_periods();
  const int n = inst.num_aircraft();
  const double HM = p.flight_max;
  MatrixModel model;

  // Columns, grouped by kind and ordered by (i, j, t).
  std::map<std::tuple<int, int, int>, int> a_col, as_col;  // (j, t, i)
  std::vector<std::vector<int>> m_col(n, std::vector<int>(T + 1, -1));
  auto u_col = m_col, r_col = m_col;
  for (int i = 0; i < n; ++i)
    for (int j : sets.options[i])
      for (int t : inst.missions[j].window) a_col[{j, t, i}] = model.add_variable(assign_name(j, t, i), VarKind::Binary, 0, 1);
  for (int i = 0; i < n; ++i)
    for (int j : sets.options[i])
      for (int t : inst.missions[j].window) as_col[{j, t, i}] = model.add_variable(start_name(j, t, i), VarKind::Binary, 0, 1);
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t) m_col[i][t] = model.add_variable(check_name(i, t), VarKind::Binary, 0, 1);
  const double u_ub = Checker(inst).usage_upper_bound();
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t) u_col[i][t] = model.add_variable(usage_name(i, t), VarKind::Continuous, 0, u_ub);
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t) r_col[i][t] = model.add_variable(rft_name(i, t), VarKind::Continuous, 0, HM);

  auto a = [&](int j, int t, int i) { return a_col.at({j, t, i}); };
  auto started_terms = [&](int i, int t, double coef, std::vector<Term>& out) {
    for (int q : started_window(t, p)) out.push_back({m_col[i][q], coef});
  };
  using detail::emit;
  using detail::idx;

  // cap
  for (int t = 1; t <= T; ++t) {
    std::vector<Term> terms;
    for (int i = 0; i < n; ++i) started_terms(i, t, 1.0, terms);
    emit(model, "cap" + idx({t}), std::move(terms), Sense::Le, p.capacity - p.known_in_maintenance(t));
  }
  // req
  for (int j = 0; j < inst.num_missions(); ++j)
    for (int t : inst.missions[j].window) {
      std::vector<Term> terms;
      for (int i : sets.eligible[j]) terms.push_back({a(j, t, i), 1.0});
      emit(model, "req" + idx({j, t}), std::move(terms), Sense::Ge, inst.missions[j].required);
    }
  // state
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms;
      started_terms(i, t, 1.0, terms);
      for (int j : sets.missions_at[t])
        if (sets.is_eligible(j, i)) terms.push_back({a(j, t, i), 1.0});
      if (terms.size() > 1) emit(model, "state" + idx({i, t}), std::move(terms), Sense::Le, 1.0);
    }
  // start
  for (int j = 0; j < inst.num_missions(); ++j) {
    const auto& mis = inst.missions[j];
    for (int i : sets.eligible[j])
      for (int t : mis.window) {
        std::vector<Term> terms{{as_col.at({j, t, i}), 1.0}, {a(j, t, i), -1.0}};
        double rhs = 0.0;
        if (t == 1) {
          const auto& pre = sets.preassigned[j];
          rhs = std::find(pre.begin(), pre.end(), i) != pre.end() ? -1.0 : 0.0;
        } else if (mis.window.contains(t - 1)) {
          terms.push_back({a(j, t - 1, i), 1.0});
        }
        emit(model, "start" + idx({j, t, i}), std::move(terms), Sense::Ge, rhs);
      }
  }
  // mtime
  for (int j = 0; j < inst.num_missions(); ++j) {
    const auto& mis = inst.missions[j];
    for (int i : sets.eligible[j])
      for (int t : mis.window) {
        std::vector<Term> terms;
        for (int q : min_assign_window(mis, t))
          if (mis.window.contains(q)) terms.push_back({as_col.at({j, q, i}), 1.0});
        terms.push_back({a(j, t, i), -1.0});
        emit(model, "mtime" + idx({j, t, i}), std::move(terms), Sense::Le, 0.0);
      }
  }
  // clserv
  for (std::size_t k = 0; k < inst.clusters.size(); ++k)
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms;
      for (int i : sets.members[k]) started_terms(i, t, 1.0, terms);
      const auto& cl = inst.clusters[k];
      emit(model, "clserv" + idx({static_cast<int>(k), t}), std::move(terms), Sense::Le,
           cl.maint_cap[t - 1] - cl.known_in_maint[t - 1]);
    }
  // clsust
  for (std::size_t k = 0; k < inst.clusters.size(); ++k)
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms;
      for (int i : sets.members[k]) terms.push_back({r_col[i][t], 1.0});
      emit(model, "clsust" + idx({static_cast<int>(k), t}), std::move(terms), Sense::Ge,
           inst.clusters[k].sustain_floor[t - 1]);
    }
  // fly
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms;
      for (int j : sets.missions_at[t])
        if (sets.is_eligible(j, i) && inst.missions[j].hours != 0.0) terms.push_back({a(j, t, i), -inst.missions[j].hours});
      if (terms.empty()) continue;
      terms.insert(terms.begin(), Term{u_col[i][t], 1.0});
      emit(model, "fly" + idx({i, t}), std::move(terms), Sense::Ge, 0.0);
    }
  // fmin
  if (p.default_usage != 0.0)
    for (int i = 0; i < n; ++i)
      for (int t = inst.fleet[i].in_maint_remaining + 1; t <= T; ++t) {
        std::vector<Term> terms{{u_col[i][t], 1.0}};
        started_terms(i, t, p.default_usage, terms);
        emit(model, "fmin" + idx({i, t}), std::move(terms), Sense::Ge, p.default_usage);
      }
  // rftdyn
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms{{r_col[i][t], 1.0}};
      double rhs = 0.0;
      if (t == 1) rhs = inst.fleet[i].rft_init;
      else terms.push_back({r_col[i][t - 1], -1.0});
      terms.push_back({m_col[i][t], -HM});
      terms.push_back({u_col[i][t], 1.0});
      emit(model, "rftdyn" + idx({i, t}), std::move(terms), Sense::Le, rhs);
    }
  // rftchk
  if (HM != 0.0)
    for (int i = 0; i < n; ++i)
      for (int t = 1; t <= T; ++t) {
        std::vector<Term> terms{{r_col[i][t], 1.0}};
        started_terms(i, t, -HM, terms);
        emit(model, "rftchk" + idx({i, t}), std::move(terms), Sense::Ge, 0.0);
      }
  // calmin
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t) {
      const auto w = window_sets(t, p);
      if (w.blocked.size() < 2) continue;
      std::vector<Term> terms;
      for (int q : w.blocked) terms.push_back({m_col[i][q], 1.0});
      emit(model, "calmin" + idx({i, t}), std::move(terms), Sense::Le, 1.0);
    }
  // calmax
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t) {
      const auto w = window_sets(t, p);
      if (!w.forces_next) continue;
      std::vector<Term> terms;
      bool self = false;
      for (int q : w.next_check) {
        if (q == t) self = true;
        terms.push_back({m_col[i][q], q == t ? 0.0 : 1.0});
      }
      if (!self) terms.push_back({m_col[i][t], -1.0});
      emit(model, "calmax" + idx({i, t}), std::move(terms), Sense::Ge, 0.0);
    }
  // calmini
  for (int i = 0; i < n; ++i) {
    const auto w = initial_window_sets(inst.fleet[i], p);
    for (int t : w.no_check) emit(model, "calmini" + idx({i, t}), {{m_col[i][t], 1.0}}, Sense::Le, 0.0);
  }
  // calmaxi
  for (int i = 0; i < n; ++i) {
    const auto w = initial_window_sets(inst.fleet[i], p);
    if (!w.forces_check) continue;
    std::vector<Term> terms;
    for (int t : w.must_check) terms.push_back({m_col[i][t], 1.0});
    emit(model, "calmaxi" + idx({i}), std::move(terms), Sense::Ge, 1.0);
  }

  std::vector<Term> obj;
  const double check_coef = kind == ObjectiveKind::MinChecks ? 1.0 : HM;
  for (int i = 0; i < n; ++i)
    for (int t = 1; t <= T; ++t)
      if (check_coef != 0.0) obj.push_back({m_col[i][t], check_coef});
  if (kind == ObjectiveKind::MinChecksMaxRft && T > 0)
    for (int i = 0; i < n; ++i) obj.push_back({r_col[i][T], -1.0});
  model.set_objective(std::move(obj));
  return model;
}

/// Applies the initial-state fixings as variable bounds: no check start and
/// no mission while an initial check finishes, and forced leading periods
/// of a preassigned mission.
inline MatrixModel fix_initial_conditions(MatrixModel model, const Instance& inst) {
  const auto sets = derive_index_sets(inst);
  auto fix = [&](const std::string& name, double lb, double ub) {
    const int c = model.column(name);
    if (c < 0) throw ModelError("fixing references missing column " + name);
    auto& v = model.variable(c);
    v.lb = std::max(v.lb, lb);
    v.ub = std::min(v.ub, ub);
    if (v.lb > v.ub) throw ModelError("conflicting fixings on " + name);
  };
  for (int i = 0; i < inst.num_aircraft(); ++i) {
    const auto& ac = inst.fleet[i];
    if (ac.in_maint_remaining > 0 && ac.preassigned)
      throw ModelError("aircraft " + ac.id + " is both in maintenance and preassigned");
    const int nm = std::min(ac.in_maint_remaining, inst.num_periods());
    for (int t = 1; t <= nm; ++t) {
      fix(check_name(i, t), 0, 0);
      for (int j : sets.missions_at[t])
        if (sets.is_eligible(j, i)) fix(assign_name(j, t, i), 0, 0);
    }
    if (auto run = forced_run(inst, sets, i))
      for (int t : run->periods) fix(assign_name(run->mission, t, i), 1, 1);
  }
  return model;
}

inline MatrixModel build_fixed_model(const Instance& inst, ObjectiveKind kind) {
  return fix_initial_conditions(build_model(inst, kind), inst);
}

/// Encodes a state grid as a model point, completing a^s, u and rft
/// canonically. Throws ExtractionError when a mission cell has no variable.
inline std::vector<double> encode_solution(const MatrixModel& model, const Instance& inst, const Solution& sol) {
  const Checker chk(inst);
  Solution s = sol;
  chk.derive(s);
  std::vector<double> x(model.num_vars(), 0.0);
  auto put = [&](const std::string& name, double v) {
    const int c = model.column(name);
    if (c < 0) throw ExtractionError("no column " + name + " for solution cell");
    x[c] = v;
  };
  for (int i = 0; i < inst.num_aircraft(); ++i)
    for (int t = 1; t <= inst.num_periods(); ++t) {
      const Cell& c = s.at(i, t);
      if (c.kind == CellKind::Mission) {
        if (!chk.has_assignment_var(c.mission, t, i))
          throw ExtractionError("mission cell without variable at aircraft " + std::to_string(i) + ", period " +
                                std::to_string(t));
        put(assign_name(c.mission, t, i), 1.0);
        put(start_name(c.mission, t, i), chk.assignment_start(s, c.mission, t, i));
      }
      if (c.kind == CellKind::CheckStart) put(check_name(i, t), 1.0);
      put(usage_name(i, t), s.u[i][t - 1]);
      put(rft_name(i, t), s.rft[i][t - 1]);
    }
  return x;
}

/// Reads "name value" lines. Blank lines and lines starting with '#' are
/// skipped.
inline std::map<std::string, double> read_values(std::istream& in) {
  std::map<std::string, double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name) || name[0] == '#') continue;
    std::string tok;
    if (!(ls >> tok)) throw ExtractionError("line " + std::to_string(lineno) + ": missing value for " + name);
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
      throw ExtractionError("line " + std::to_string(lineno) + ": bad value '" + tok + "'");
    out[name] = v;
  }
  return out;
}

inline void write_values(std::ostream& out, const MatrixModel& model, const std::vector<double>& x,
                         bool nonzero_only = false) {
  char buf[64];
  for (int c = 0; c < model.num_vars(); ++c) {
    if (nonzero_only && x[c] == 0.0) continue;
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x[c]);
    out << model.variable(c).name << ' ' << std::string_view(buf, end - buf) << '\n';
  }
}

/// Rebuilds a Solution from external variable values. Only a and m are
/// read; missing names count as 0. u, rft and rct are re-derived.
inline Solution extract_solution(const MatrixModel& model, const std::map<std::string, double>& values,
                                 const Instance& inst, double tol = 1e-6) {
  std::vector<std::string> fractional;
  std::vector<std::pair<VarTag, int>> ones;
  for (const auto& [name, v] : values) {
    const int c = model.column(name);
    if (c < 0) throw ExtractionError("unknown variable " + name);
    if (model.variable(c).kind != VarKind::Binary) continue;
    const double r = std::round(v);
    if (std::abs(v - r) > tol || r < 0 || r > 1) {
      fractional.push_back(name + "=" + std::to_string(v));
      continue;
    }
    if (r == 1.0) ones.push_back({*parse_var_name(name), c});
  }
  if (!fractional.empty()) {
    std::string msg = "non-integral binary values:";
    for (const auto& f : fractional) msg += " " + f;
    throw ExtractionError(msg);
  }
  Solution s = Solution::blank(inst);
  const int T = inst.num_periods();
  for (const auto& [tag, c] : ones) {
    if (tag.family != VarFamily::Assign) continue;
    Cell& cell = s.at(tag.aircraft, tag.period);
    if (cell.kind == CellKind::Mission && cell.mission != tag.mission)
      throw ExtractionError("aircraft " + std::to_string(tag.aircraft) + " flies two missions in period " +
                            std::to_string(tag.period));
    cell = Cell::on_mission(tag.mission);
  }
  for (const auto& [tag, c] : ones) {
    if (tag.family != VarFamily::Check) continue;
    const int i = tag.aircraft;
    s.at(i, tag.period) = Cell::check_start();
    for (int q = tag.period + 1; q < tag.period + inst.params.check_duration && q <= T; ++q)
      if (s.at(i, q).kind == CellKind::Free) s.at(i, q) = Cell::check_body();
  }
  derive_usage(inst, s);
  return s;
}

}  // namespace mip
}  // namespace fmp
