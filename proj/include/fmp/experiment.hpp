#pragma once

// Batch runs over scenario grids, per-scenario summaries and Gantt charts.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "brute_force.hpp"
#include "core.hpp"
#include "generator.hpp"
#include "heuristic.hpp"
#include "mip.hpp"
#include "model.hpp"
#include "validator.hpp"

namespace fmp {

enum class Pipeline { Generate, Build, Heuristic, Validate };

inline Pipeline pipeline_from_string(const std::string& s) {
  if (s == "generate") return Pipeline::Generate;
  if (s == "build") return Pipeline::Build;
  if (s == "heuristic") return Pipeline::Heuristic;
  if (s == "validate") return Pipeline::Validate;
  throw ConfigError("unknown pipeline '" + s + "' (generate, build, heuristic, validate)");
}

enum class RunOutcome { Feasible, Infeasible, NoSolution };

inline const char* run_outcome_name(RunOutcome o) {
  switch (o) {
    case RunOutcome::Feasible: return "Feasible";
    case RunOutcome::Infeasible: return "Infeasible";
    case RunOutcome::NoSolution: return "NoSolution";
  }
  return "?";
}

struct ExperimentBudget {
  double heuristic_seconds = 60.0;
  long iter_limit = 5'000'000;
  ObjectiveKind objective = ObjectiveKind::MinChecks;
};

struct StageTimes {
  double generate = 0.0;
  double build = 0.0;
  double heuristic = 0.0;
  double validate = 0.0;
};

struct RunRecord {
  std::string scenario;
  int index = 0;
  std::uint64_t seed = 0;
  RunOutcome outcome = RunOutcome::NoSolution;
  std::optional<double> checks;      // objective kind 1
  std::optional<double> flight;      // objective kind 2
  ModelStats stats{};
  StageTimes times;
  std::string error;
};

/// Runs generation and the stages up to `pipeline` for one grid entry.
/// Stage failures are recorded, never thrown.
inline RunRecord run_entry(const GridEntry& e, Pipeline pipeline, const ExperimentBudget& budget) {
  using clock = std::chrono::steady_clock;
  auto secs = [](clock::time_point a) { return std::chrono::duration<double>(clock::now() - a).count(); };
  RunRecord r;
  r.scenario = e.scenario;
  r.index = e.index;
  r.seed = e.config.seed;
  try {
    auto t0 = clock::now();
    const Instance inst = generate_instance(e.config);
    r.times.generate = secs(t0);
    if (pipeline == Pipeline::Generate) return r;

    t0 = clock::now();
    r.stats = model_stats(mip::build_fixed_model(inst, budget.objective));
    r.times.build = secs(t0);
    if (pipeline == Pipeline::Build) return r;

    t0 = clock::now();
    SaParams p;
    p.time_limit = budget.heuristic_seconds;
    p.iter_limit = budget.iter_limit;
    p.seed = e.config.seed;
    p.objective = budget.objective;
    const auto res = sa_solve(inst, p);
    r.times.heuristic = secs(t0);

    t0 = clock::now();
    const bool ok = check_solution(inst, res.solution).feasible();
    r.times.validate = secs(t0);
    if (ok) {
      r.outcome = RunOutcome::Feasible;
      r.checks = objective(inst, res.solution, ObjectiveKind::MinChecks);
      r.flight = objective(inst, res.solution, ObjectiveKind::MinChecksMaxRft);
    } else if (inst.num_aircraft() <= BruteForceLimits{}.max_aircraft && inst.num_periods() <= BruteForceLimits{}.max_periods) {
      // Tiny instances can be settled exactly.
      if (!brute_force_solve(inst, ObjectiveKind::MinChecks).feasible) r.outcome = RunOutcome::Infeasible;
    }
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  return r;
}

/// Executes every (scenario, index) of the grid on a bounded worker pool.
/// Records come back ordered as expand_grid lists them.
inline std::vector<RunRecord> run_experiment(const ScenarioGrid& grid, Pipeline pipeline, const ExperimentBudget& budget,
                                             int workers = 1,
                                             const std::function<void(const RunRecord&)>& on_record = {}) {
  const auto entries = expand_grid(grid);
  std::vector<RunRecord> out(entries.size());
  if (entries.empty()) return out;
  workers = std::clamp(workers, 1, static_cast<int>(entries.size()));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  auto work = [&] {
    for (std::size_t k = next++; k < entries.size(); k = next++) {
      out[k] = run_entry(entries[k], pipeline, budget);
      if (on_record) {
        std::lock_guard<std::mutex> lock(mu);
        on_record(out[k]);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

namespace exp_detail {

inline std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

inline std::string opt(const std::optional<double>& v) { return v ? num(*v) : ""; }

inline std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace exp_detail

inline std::string records_csv(const std::vector<RunRecord>& records) {
  using namespace exp_detail;
  std::ostringstream out;
  out << "scenario,index,seed,outcome,checks,flight,n_vars,n_cons,n_nonzeros,n_binary,"
         "t_generate,t_build,t_heuristic,t_validate,error\n";
  for (const auto& r : records)
    out << quote(r.scenario) << ',' << r.index << ',' << r.seed << ',' << run_outcome_name(r.outcome) << ','
        << opt(r.checks) << ',' << opt(r.flight) << ',' << r.stats.n_vars << ',' << r.stats.n_cons << ','
        << r.stats.n_nonzeros << ',' << r.stats.n_binary << ',' << num(r.times.generate) << ','
        << num(r.times.build) << ',' << num(r.times.heuristic) << ',' << num(r.times.validate) << ','
        << quote(r.error) << '\n';
  return out.str();
}

struct ScenarioSummary {
  std::string scenario;
  int instances = 0;
  int feasible = 0;
  int infeasible = 0;
  int no_solution = 0;
  int errors = 0;
  double t_min = 0.0;  // heuristic seconds
  double t_avg = 0.0;
  double vars = 0.0;
  double cons = 0.0;
  double nonzeros = 0.0;
  std::optional<double> checks_avg;  // over feasible runs
};

/// Per-scenario means, in first-appearance order.
inline std::vector<ScenarioSummary> summarize(const std::vector<RunRecord>& records) {
  std::vector<ScenarioSummary> out;
  std::map<std::string, std::size_t> pos;
  std::vector<double> check_sum;
  for (const auto& r : records) {
    auto [it, fresh] = pos.try_emplace(r.scenario, out.size());
    if (fresh) {
      out.push_back({});
      out.back().scenario = r.scenario;
      out.back().t_min = std::numeric_limits<double>::infinity();
      check_sum.push_back(0.0);
    }
    auto& s = out[it->second];
    ++s.instances;
    s.feasible += r.outcome == RunOutcome::Feasible;
    s.infeasible += r.outcome == RunOutcome::Infeasible;
    s.no_solution += r.outcome == RunOutcome::NoSolution;
    s.errors += !r.error.empty();
    s.t_min = std::min(s.t_min, r.times.heuristic);
    s.t_avg += r.times.heuristic;
    s.vars += r.stats.n_vars;
    s.cons += r.stats.n_cons;
    s.nonzeros += r.stats.n_nonzeros;
    if (r.checks) check_sum[it->second] += *r.checks;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    auto& s = out[k];
    const double n = s.instances;
    s.t_avg /= n;
    s.vars /= n;
    s.cons /= n;
    s.nonzeros /= n;
    if (s.feasible > 0) s.checks_avg = check_sum[k] / s.feasible;
  }
  return out;
}

inline std::string summary_csv(const std::vector<ScenarioSummary>& rows) {
  using namespace exp_detail;
  std::ostringstream out;
  out << "scenario,instances,feasible,infeasible,no_solution,errors,t_min,t_avg,vars,cons,non_zero,checks_avg\n";
  for (const auto& s : rows)
    out << quote(s.scenario) << ',' << s.instances << ',' << s.feasible << ',' << s.infeasible << ','
        << s.no_solution << ',' << s.errors << ',' << num(s.t_min) << ',' << num(s.t_avg) << ',' << num(s.vars)
        << ',' << num(s.cons) << ',' << num(s.nonzeros) << ',' << opt(s.checks_avg) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Gantt

/// Label of one cell: "M" in check, the mission's hours on a mission, empty
/// when free.
inline std::string gantt_label(const Instance& inst, const Cell& c) {
  if (c.is_check()) return "M";
  if (c.kind == CellKind::Mission) return exp_detail::num(inst.missions.at(c.mission).hours);
  return "";
}

struct Gantt {
  std::string text;
  std::string csv;
};

inline Gantt render_gantt(const Instance& inst, const Solution& s) {
  const int n = s.num_aircraft();
  const int T = s.num_periods();
  std::size_t name_w = 2, cell_w = std::to_string(std::max(T, 1)).size();
  for (const auto& a : inst.fleet) name_w = std::max(name_w, a.id.size());
  for (const auto& m : inst.missions) cell_w = std::max(cell_w, exp_detail::num(m.hours).size());
  std::ostringstream text, csv;
  text << std::string(name_w, ' ');
  for (int t = 1; t <= T; ++t) text << ' ' << std::setw(static_cast<int>(cell_w)) << t;
  text << '\n';
  csv << "aircraft,period,cell\n";
  for (int i = 0; i < n; ++i) {
    const std::string& id = i < inst.num_aircraft() ? inst.fleet[i].id : std::to_string(i);
    text << std::left << std::setw(static_cast<int>(name_w)) << id << std::right;
    for (int t = 1; t <= T; ++t) {
      const auto label = gantt_label(inst, s.at(i, t));
      text << ' ' << std::setw(static_cast<int>(cell_w)) << label;
      csv << exp_detail::quote(id) << ',' << t << ',' << label << '\n';
    }
    text << '\n';
  }
  return {text.str(), csv.str()};
}

}  // namespace fmp
