// Generates a small instance, searches for a plan and prints it.

#include <iostream>

#include "fmp.hpp"

int main(int argc, char** argv) {
  fmp::GenConfig cfg;
  cfg.seed = argc > 1 ? std::stoull(argv[1]) : 3;
  cfg.num_periods = 24;
  cfg.min_required = 1;
  cfg.max_required = 2;
  cfg.fleet_size = 6;
  const auto inst = fmp::generate_instance(cfg);

  const auto model = fmp::mip::build_fixed_model(inst, fmp::ObjectiveKind::MinChecks);
  const auto st = fmp::model_stats(model);
  std::cout << "model: " << st.n_vars << " vars, " << st.n_cons << " rows, " << st.n_nonzeros << " nonzeros\n";

  fmp::SaParams p;
  p.time_limit = 10;
  p.seed = cfg.seed;
  const auto res = fmp::sa_solve(inst, p);
  std::cout << "outcome: " << fmp::outcome_name(res.trace.outcome) << ", iterations " << res.trace.iterations
            << ", penalty " << res.penalty << "\n";

  const auto rep = fmp::check_solution(inst, res.solution);
  std::cout << "feasible: " << (rep.feasible() ? "yes" : "no") << ", checks "
            << fmp::objective(inst, res.solution, fmp::ObjectiveKind::MinChecks) << "\n\n";
  std::cout << fmp::render_gantt(inst, res.solution).text;
  return rep.feasible() ? 0 : 1;
}
