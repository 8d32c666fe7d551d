#pragma once

#include <cstdint>

#include "moo/woa.hpp"

namespace uswarm {

struct Nsga2Params {
  int population = 30;
  int generations = 0;   // 0: derived from eval_budget
  long eval_budget = 0;  // total objective evaluations, including the initial population
  double sbx_eta = 15.0;
  double mutation_eta = 20.0;
  std::uint64_t seed = 1;
  double offset_radius = 50.0;
  int threads = 0;
};

// Generational NSGA-II over the full mission decision vector: per-T-UAV random
// keys encode the visiting order, the rest are the same continuous variables
// the nested engine uses (hover altitude, planar offset, GU and relay powers).
// Binary tournament on constrained rank then crowding, SBX crossover and
// polynomial mutation. Same archive semantics and evaluation accounting as
// ins_woa, so budgets compare one to one.
OptimizeResult nsga2(const Scenario& scenario, const Deployment& deployment,
                     const Nsga2Params& params);

}  // namespace uswarm
