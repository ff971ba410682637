#pragma once

// Fixed Interval Scheduling as a flight and maintenance planning instance.
//
// Employees become aircraft and tasks become missions that need one aircraft
// over their whole interval. Maintenance is switched off (zero-length checks,
// zero flight potential), so the image is feasible exactly when every task
// can be given to an eligible employee without overlaps.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "validator.hpp"

namespace fmp {

struct FisTask {
  std::string id;
  int start = 1;
  int end = 1;
  std::vector<std::string> eligible;

  int duration() const { return end - start; }
};

struct FisInstance {
  std::vector<FisTask> tasks;
  std::vector<std::string> employees;

  /// Tasks each employee may take (inverse of the eligibility lists).
  std::map<std::string, std::vector<std::string>> tasks_of() const {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& e : employees) out[e];
    for (const auto& p : tasks)
      for (const auto& e : p.eligible) out[e].push_back(p.id);
    return out;
  }

  int horizon() const {
    int T = 0;
    for (const auto& p : tasks) T = std::max(T, p.end);
    return T;
  }
};

using TaskAssignment = std::map<std::string, std::string>;

struct ReductionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline void validate_fis(const FisInstance& fis) {
  std::set<std::string> emp(fis.employees.begin(), fis.employees.end());
  if (emp.size() != fis.employees.size()) throw ReductionError("duplicate employee id");
  std::set<std::string> ids;
  for (const auto& p : fis.tasks) {
    if (!ids.insert(p.id).second) throw ReductionError("duplicate task id " + p.id);
    if (p.start < 1) throw ReductionError("task " + p.id + ": start before period 1");
    if (p.start >= p.end) throw ReductionError("task " + p.id + ": need start < end");
    if (p.eligible.empty()) throw ReductionError("task " + p.id + ": no eligible employee");
    for (const auto& e : p.eligible)
      if (!emp.count(e)) throw ReductionError("task " + p.id + ": unknown employee " + e);
  }
}

inline std::string fis_standard(const std::string& task) { return "task:" + task; }

inline Instance fis_to_fmp(const FisInstance& fis) {
  validate_fis(fis);
  Instance inst;
  inst.reduction = true;
  const int T = fis.horizon();
  auto& p = inst.params;
  p.num_periods = T;
  p.check_duration = 0;
  p.capacity = 0;
  p.calendar_max = 0;
  p.calendar_min = 0;
  p.flight_max = 0.0;
  p.default_usage = 0.0;
  p.in_maintenance.assign(T, 0);

  for (const auto& task : fis.tasks) {
    Mission m;
    m.id = task.id;
    m.window = {task.start, task.end};
    m.hours = 0.0;
    m.required = 1;
    m.min_assign = task.duration();
    m.type = "fis";
    m.standard = fis_standard(task.id);
    inst.missions.push_back(std::move(m));
  }
  const auto by_employee = fis.tasks_of();
  for (const auto& e : fis.employees) {
    Aircraft a;
    a.id = e;
    a.type = "fis";
    for (const auto& task : by_employee.at(e)) a.standards.insert(fis_standard(task));
    a.rft_init = 0.0;
    a.rct_init = T + 1;
    inst.fleet.push_back(std::move(a));
  }
  if (!fis.employees.empty()) {
    Cluster k;
    k.id = "K0";
    k.members = fis.employees;
    k.maint_cap.assign(T, static_cast<int>(fis.employees.size()));
    k.sustain_floor.assign(T, 0.0);
    k.known_in_maint.assign(T, 0);
    inst.clusters.push_back(std::move(k));
  }
  validate_instance(inst);
  return inst;
}

/// Reads the task map off a feasible solution of fis_to_fmp(fis). Each task
/// goes to the first aircraft holding its mission over the full interval.
inline TaskAssignment fmp_solution_to_fis(const FisInstance& fis, const Solution& sol) {
  const Instance inst = fis_to_fmp(fis);
  Solution s = sol;
  const Checker chk(inst);
  if (s.num_aircraft() != inst.num_aircraft() || s.num_periods() != inst.num_periods())
    throw ReductionError("solution shape does not match the reduced instance");
  chk.derive(s);
  if (!chk.check(s).feasible()) throw ReductionError("solution is infeasible for the reduced instance");
  TaskAssignment out;
  for (int j = 0; j < inst.num_missions(); ++j) {
    const auto& m = inst.missions[j];
    for (int i : chk.sets().eligible[j]) {
      bool whole = true;
      for (int t : m.window) whole &= chk.assigned(s, j, t, i);
      if (whole) {
        out[m.id] = inst.fleet[i].id;
        break;
      }
    }
    if (!out.count(m.id)) throw ReductionError("task " + m.id + " is not held over its full interval");
  }
  return out;
}

inline nlohmann::json fis_to_json(const FisInstance& fis) {
  nlohmann::json tasks = nlohmann::json::array();
  for (const auto& p : fis.tasks)
    tasks.push_back({{"id", p.id}, {"start", p.start}, {"end", p.end}, {"eligible", p.eligible}});
  return {{"format", "fis"}, {"version", 1}, {"employees", fis.employees}, {"tasks", tasks}};
}

inline FisInstance fis_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "fis") != "fis") throw ReductionError("not a fis document");
    FisInstance fis;
    fis.employees = j.at("employees").get<std::vector<std::string>>();
    for (const auto& t : j.at("tasks"))
      fis.tasks.push_back({t.at("id").get<std::string>(), t.at("start").get<int>(), t.at("end").get<int>(),
                           t.at("eligible").get<std::vector<std::string>>()});
    validate_fis(fis);
    return fis;
  } catch (const nlohmann::json::exception& e) {
    throw ReductionError(std::string("FIS JSON: ") + e.what());
  }
}

}  // namespace fmp
