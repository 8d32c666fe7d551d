#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "moo/pareto.hpp"
#include "rng.hpp"

namespace uswarm {

struct WoaParams {
  int population = 30;   // whale agents
  int iterations = 50;   // inner iterations per hover step
  double spiral_b = 1.0;
  std::uint64_t seed = 1;
  double offset_radius = 50.0;  // x-y freedom around each Fermat point, meters
  long eval_budget = 0;         // 0: use `iterations` as given
  int threads = 0;              // 0: hardware default; 1: serial
};

// Exploration control, linear from 2 (i = 0) to 0 (i = i_max).
double update_a(int i, int i_max);

struct DimBounds {
  std::vector<double> lo;
  std::vector<double> hi;
};

// One whale position update. Draws tau once: tau >= 0.5 takes the log-spiral
// move around the leader; otherwise each dimension draws its coefficients
// A = 2 a r1 - a, C = 2 r2 and either encircles the leader (|A| < 1) or
// searches around the given random agent (|A| >= 1). The result is clamped
// into the bounds dimension by dimension.
void woa_update(std::span<double> position, std::span<const double> leader,
                std::span<const double> random_agent, double a, double spiral_b,
                const DimBounds& bounds, Rng& rng);

// Greedy hover selection: argmin over candidates of the sum of predicted
// objective changes, each normalized by its own best-so-far value (non-positive
// bests fall back to a unit scale). Ties break toward the lower index.
int greedy_next_hover(std::span<const std::array<double, 3>> predicted_deltas,
                      const std::array<double, 3>& best_so_far);

struct OptimizeResult {
  ParetoArchive archive;
  long evaluations = 0;
  int iterations_used = 0;  // inner iterations actually run per step
  // Non-dominated snapshot of the cumulative feasible store after each hover
  // step; its hypervolume is non-decreasing by construction.
  std::vector<std::vector<ObjectiveVector>> step_fronts;
};

// Nested search over the deployment's hover steps: per step an inner
// non-dominated-sorting WOA tunes that step's continuous variables (altitude,
// planar offset, member powers, relay power) for every agent, then the greedy
// rule appends the next candidate to the shared visiting order. Final archive
// members are complete missions re-scored by `evaluate`. Deterministic for a
// given seed, independent of thread count.
OptimizeResult ins_woa(const Scenario& scenario, const Deployment& deployment,
                       const WoaParams& params);

}  // namespace uswarm
