// Command-line front end: generate, build, ingest, validate, heuristic,
// reduce, experiment, gantt.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 42;
  bool seed_set = false;
  std::string out_dir = ".";
  int workers = 1;
  bool json_logs = false;
};

Globals g;

void log(const std::string& level, const std::string& msg, const json& fields = json::object()) {
  if (g.json_logs) {
    json line = fields;
    line["level"] = level;
    line["msg"] = msg;
    line["ts"] = static_cast<std::int64_t>(std::time(nullptr));
    std::cerr << line.dump() << '\n';
  } else {
    std::cerr << "[" << level << "] " << msg;
    for (const auto& [k, v] : fields.items()) std::cerr << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
    std::cerr << '\n';
  }
}

fs::path out_path(const std::string& p) {
  fs::path path(p);
  if (path.is_relative() && g.out_dir != ".") path = fs::path(g.out_dir) / path;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  return path;
}

fmp::ObjectiveKind parse_objective(const std::string& s) {
  if (s == "checks") return fmp::ObjectiveKind::MinChecks;
  if (s == "checks+rft") return fmp::ObjectiveKind::MinChecksMaxRft;
  throw fmp::ConfigError("objective must be 'checks' or 'checks+rft'");
}

fmp::ScenarioGrid load_grid(const std::string& config) {
  fmp::ScenarioGrid grid;
  if (!config.empty()) grid = fmp::grid_from_json(fmp::read_json_file(config));
  if (g.seed_set) grid.base.seed = g.seed;
  return grid;
}

std::string safe_name(std::string s) {
  for (auto& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '=' || c == '.' || c == '_' || c == '-' || c == '+')) c = '_';
  return s;
}

int cmd_generate(const std::string& config, const std::string& out) {
  const auto grid = load_grid(config);
  const fs::path dir = out_path(out.empty() ? "." : out);
  fs::create_directories(dir);
  int count = 0;
  for (const auto& e : fmp::expand_grid(grid)) {
    const auto inst = fmp::generate_instance(e.config);
    const auto file = dir / (safe_name(e.scenario) + "_" + std::to_string(e.index) + ".json");
    fmp::save_instance(file.string(), inst);
    log("info", "instance written", {{"file", file.string()}, {"seed", e.config.seed}});
    ++count;
  }
  std::cout << json{{"instances", count}, {"dir", dir.string()}}.dump() << '\n';
  return 0;
}

int cmd_build(const std::string& instance, const std::string& objective, const std::string& lp, bool fixed) {
  const auto inst = fmp::load_instance(instance);
  const auto kind = parse_objective(objective);
  const auto model = fixed ? fmp::mip::build_fixed_model(inst, kind) : fmp::mip::build_model(inst, kind);
  const auto st = fmp::model_stats(model);
  if (!lp.empty()) {
    const auto path = out_path(lp);
    fmp::write_file(path.string(), fmp::emit_lp(model));
    log("info", "LP written", {{"file", path.string()}});
  }
  std::cout << json{{"n_vars", st.n_vars}, {"n_cons", st.n_cons}, {"n_nonzeros", st.n_nonzeros}, {"n_binary", st.n_binary}}.dump()
            << '\n';
  return 0;
}

json solution_summary(const fmp::Instance& inst, const fmp::Solution& s) {
  const auto rep = fmp::check_solution(inst, s);
  auto j = fmp::report_to_json(inst, rep);
  j["checks"] = fmp::objective(inst, s, fmp::ObjectiveKind::MinChecks);
  j["objective_checks"] = j["checks"];
  j["objective_checks_rft"] = fmp::objective(inst, s, fmp::ObjectiveKind::MinChecksMaxRft);
  return j;
}

int cmd_ingest(const std::string& instance, const std::string& values, const std::string& objective, const std::string& out) {
  const auto inst = fmp::load_instance(instance);
  const auto model = fmp::mip::build_fixed_model(inst, parse_objective(objective));
  std::ifstream in(values);
  if (!in) throw std::runtime_error("cannot open " + values);
  const auto vals = fmp::mip::read_values(in);
  const auto sol = fmp::mip::extract_solution(model, vals, inst);
  if (!out.empty()) {
    const auto path = out_path(out);
    fmp::write_file(path.string(), fmp::solution_to_json(inst, sol).dump(1) + "\n");
    log("info", "solution written", {{"file", path.string()}});
  }
  const auto summary = solution_summary(inst, sol);
  std::cout << summary.dump() << '\n';
  return summary["feasible"].get<bool>() ? 0 : 1;
}

int cmd_validate(const std::string& instance, const std::string& solution) {
  const auto inst = fmp::load_instance(instance);
  const auto sol = fmp::solution_from_json(inst, fmp::read_json_file(solution));
  const auto summary = solution_summary(inst, sol);
  std::cout << summary.dump(1) << '\n';
  return summary["feasible"].get<bool>() ? 0 : 1;
}

struct HeuristicArgs {
  std::string instance, out, warmstart, objective = "checks";
  double time_limit = 600.0;
  long iter_limit = 50'000'000;
  bool nearly_feasible = false;
  bool keep_going = false;
  int restarts = 1;
};

int cmd_heuristic(const HeuristicArgs& a) {
  const auto inst = fmp::load_instance(a.instance);
  fmp::SaParams p;
  p.time_limit = a.time_limit;
  p.iter_limit = a.iter_limit;
  p.seed = g.seed;
  p.objective = parse_objective(a.objective);
  p.stop_on_feasible = !a.keep_going;
  const auto res = a.restarts > 1 ? fmp::sa_solve_restarts(inst, p, a.restarts, g.workers) : fmp::sa_solve(inst, p);
  log("info", "search finished",
      {{"outcome", fmp::outcome_name(res.trace.outcome)}, {"iterations", res.trace.iterations}, {"seconds", res.trace.wall_time}});
  if (!a.out.empty()) {
    const auto path = out_path(a.out);
    fmp::write_file(path.string(), fmp::solution_to_json(inst, res.solution).dump(1) + "\n");
  }
  if (!a.warmstart.empty() && !res.feasible && !a.nearly_feasible) {
    log("warn", "no warm start written: solution infeasible (use --nearly-feasible)");
  } else if (!a.warmstart.empty()) {
    const auto path = out_path(a.warmstart);
    std::ofstream ws(path);
    fmp::export_warm_start(ws, inst, res.solution, p.objective, a.nearly_feasible);
  }
  auto summary = solution_summary(inst, res.solution);
  summary["outcome"] = fmp::outcome_name(res.trace.outcome);
  summary["iterations"] = res.trace.iterations;
  summary["wall_time"] = res.trace.wall_time;
  summary["penalty"] = res.penalty;
  summary.erase("entries");
  std::cout << summary.dump() << '\n';
  return res.feasible ? 0 : 1;
}

int cmd_reduce(const std::string& fis_file, const std::string& out) {
  const auto fis = fmp::fis_from_json(fmp::read_json_file(fis_file));
  const auto inst = fmp::fis_to_fmp(fis);
  const auto path = out_path(out);
  fmp::save_instance(path.string(), inst);
  std::cout << json{{"aircraft", inst.num_aircraft()}, {"missions", inst.num_missions()}, {"periods", inst.num_periods()}}.dump()
            << '\n';
  return 0;
}

int cmd_experiment(const std::string& config, const std::string& pipeline, double budget, const std::string& objective) {
  const auto grid = load_grid(config);
  fmp::ExperimentBudget b;
  b.heuristic_seconds = budget;
  b.objective = parse_objective(objective);
  const auto records = fmp::run_experiment(grid, fmp::pipeline_from_string(pipeline), b, g.workers, [](const fmp::RunRecord& r) {
    log("info", "run finished", {{"scenario", r.scenario}, {"index", r.index}, {"outcome", fmp::run_outcome_name(r.outcome)}});
  });
  const auto rec_path = out_path("records.csv");
  const auto sum_path = out_path("summary.csv");
  fmp::write_file(rec_path.string(), fmp::records_csv(records));
  const auto summary = fmp::summarize(records);
  fmp::write_file(sum_path.string(), fmp::summary_csv(summary));
  std::cout << fmp::summary_csv(summary);
  return 0;
}

int cmd_gantt(const std::string& instance, const std::string& solution, const std::string& csv) {
  const auto inst = fmp::load_instance(instance);
  const auto sol = fmp::solution_from_json(inst, fmp::read_json_file(solution));
  const auto chart = fmp::render_gantt(inst, sol);
  std::cout << chart.text;
  if (!csv.empty()) fmp::write_file(out_path(csv).string(), chart.csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flight and maintenance planning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option_function<std::uint64_t>("--seed", [](std::uint64_t s) { g.seed = s, g.seed_set = true; }, "Random seed");
  app.add_option("--out-dir", g.out_dir, "Directory for relative output paths");
  app.add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--json-logs", g.json_logs, "Log as JSON lines on stderr");

  std::string config, out, instance, objective = "checks", lp, values, solution, fis, pipeline = "heuristic", csv;
  bool unfixed = false;
  double budget = 60.0;
  HeuristicArgs ha;

  auto* gen = app.add_subcommand("generate", "Generate instances from a config or scenario grid");
  gen->add_option("--config", config, "GenConfig or grid JSON");
  gen->add_option("--out", out, "Output directory");

  auto* build = app.add_subcommand("build", "Build the model and emit LP");
  build->add_option("--instance", instance)->required();
  build->add_option("--objective", objective)->check(CLI::IsMember({"checks", "checks+rft"}));
  build->add_option("--lp", lp, "LP output file");
  build->add_flag("--no-fix", unfixed, "Skip initial-condition fixings");

  auto* ingest = app.add_subcommand("ingest", "Read solver values into a solution");
  ingest->add_option("--instance", instance)->required();
  ingest->add_option("--values", values, "\"name value\" file")->required();
  ingest->add_option("--objective", objective)->check(CLI::IsMember({"checks", "checks+rft"}));
  ingest->add_option("--out", out, "Solution JSON output");

  auto* validate = app.add_subcommand("validate", "Check a solution");
  validate->add_option("--instance", instance)->required();
  validate->add_option("--solution", solution)->required();

  auto* heur = app.add_subcommand("heuristic", "Simulated annealing search");
  heur->add_option("--instance", ha.instance)->required();
  heur->add_option("--time-limit", ha.time_limit, "Seconds");
  heur->add_option("--iter-limit", ha.iter_limit);
  heur->add_option("--out", ha.out, "Solution JSON output");
  heur->add_option("--warmstart", ha.warmstart, "\"name value\" warm-start output");
  heur->add_flag("--nearly-feasible", ha.nearly_feasible, "Export warm starts even when infeasible");
  heur->add_flag("--keep-going", ha.keep_going, "Keep improving the objective after feasibility");
  heur->add_option("--restarts", ha.restarts, "Independent restarts (run on --workers threads)");
  heur->add_option("--objective", ha.objective)->check(CLI::IsMember({"checks", "checks+rft"}));

  auto* red = app.add_subcommand("reduce", "Fixed interval scheduling to planning instance");
  red->add_option("--fis", fis)->required();
  red->add_option("--out", out)->required();

  auto* exp = app.add_subcommand("experiment", "Run a scenario grid");
  exp->add_option("--config", config, "Grid JSON");
  exp->add_option("--pipeline", pipeline)->check(CLI::IsMember({"generate", "build", "heuristic", "validate"}));
  exp->add_option("--budget", budget, "Heuristic seconds per instance");
  exp->add_option("--objective", objective)->check(CLI::IsMember({"checks", "checks+rft"}));

  auto* gantt = app.add_subcommand("gantt", "Render a solution as a Gantt grid");
  gantt->add_option("--instance", instance)->required();
  gantt->add_option("--solution", solution)->required();
  gantt->add_option("--csv", csv, "CSV twin output");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_generate(config, out);
    if (*build) return cmd_build(instance, objective, lp, !unfixed);
    if (*ingest) return cmd_ingest(instance, values, objective, out);
    if (*validate) return cmd_validate(instance, solution);
    if (*heur) return cmd_heuristic(ha);
    if (*red) return cmd_reduce(fis, out);
    if (*exp) return cmd_experiment(config, pipeline, budget, objective);
    if (*gantt) return cmd_gantt(instance, solution, csv);
  } catch (const std::exception& e) {
    log("error", e.what());
    return 2;
  }
  return 0;
}
