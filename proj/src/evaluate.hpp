#pragma once

#include <optional>
#include <string>
#include <vector>

#include "energy.hpp"
#include "predeploy.hpp"
#include "scenario.hpp"

namespace uswarm {

// (TEU, AEG, ADG): total swarm energy, mean GU energy, mean GU delay.
struct ObjectiveVector {
  double teu_j = 0.0;
  double aeg_j = 0.0;
  double adg_s = 0.0;

  double operator[](int i) const { return i == 0 ? teu_j : i == 1 ? aeg_j : adg_s; }
};

// Decision variables left open after pre-deployment: the visiting order per
// T-UAV, one 3D hover point per candidate, and all transmit powers.
struct Solution {
  std::vector<std::vector<int>> orderings;        // per T-UAV: candidate visit order
  std::vector<std::vector<Point3>> hover_points;  // per T-UAV, indexed by candidate
  std::vector<double> gu_powers;                  // indexed by GU
  std::vector<double> relay_powers;               // indexed by T-UAV
};

struct Evaluation {
  ObjectiveVector objectives;
  bool link_infeasible = false;  // some rate was zero; objectives are not meaningful
  std::vector<EnergyBreakdown> tuav_energy;   // per T-UAV
  std::vector<LegTiming> tuav_timing;         // per T-UAV: total hover / flight time
  std::vector<double> swarm_hover_time;       // T_s per swarm
  std::vector<double> swarm_energy;           // E_s per swarm
  std::vector<double> gu_delay;               // T_u per GU
  std::vector<double> gu_energy;              // E_u per GU
};

struct ConstraintDetail {
  std::string constraint;
  double excess = 0.0;  // normalized violation magnitude
};

struct FeasibilityReport {
  bool feasible = true;
  double violation = 0.0;  // sum of normalized excesses; 0 iff feasible
  std::vector<ConstraintDetail> details;
};

// Pure mission evaluation. Identical inputs give bit-identical outputs. When a
// link rate is zero the result is flagged link_infeasible instead of carrying
// a fabricated penalty value.
Evaluation evaluate(const Scenario& scenario, const Deployment& deployment,
                    const Solution& solution);

// Checks the per-GU uniqueness and capacity of the connection plan, rate
// thresholds, delay budgets, power bounds, hover-volume bounds, and that every
// ordering is a permutation. Excesses are normalized by the constraint scale.
FeasibilityReport feasibility(const Scenario& scenario, const Deployment& deployment,
                              const Solution& solution);

// Structural sanity (sizes and index ranges) shared by the optimizers; throws
// ConfigError with a description when the solution does not fit the deployment.
void check_solution_shape(const Scenario& scenario, const Deployment& deployment,
                          const Solution& solution);

}  // namespace uswarm
