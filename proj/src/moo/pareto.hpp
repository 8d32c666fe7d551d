#pragma once

#include <span>
#include <vector>

#include "evaluate.hpp"

namespace uswarm {

// Constrained domination (Deb's rule): a feasible member dominates any
// infeasible one; among infeasible, lower violation dominates; among feasible,
// componentwise minimization domination applies.
bool dominates(const ObjectiveVector& a, double violation_a, const ObjectiveVector& b,
               double violation_b);

// Fast non-dominated sort; returns fronts of member indices, best first.
// Violations may be absent (all feasible).
std::vector<std::vector<int>> fast_nondominated_sort(std::span<const ObjectiveVector> objectives,
                                                     std::span<const double> violations = {});

// Per-member crowding distance within one front. For each objective the
// boundary members get infinity and interior members the normalized neighbor
// gap; a degenerate objective (max == min) contributes nothing.
std::vector<double> crowding_distance(std::span<const ObjectiveVector> front);

// Exact 3-objective hypervolume (minimization) by sweeping the third axis and
// accumulating 2D staircase areas. Throws if any point exceeds the reference.
double hypervolume(std::span<const ObjectiveVector> points, const ObjectiveVector& reference);

struct ArchiveMember {
  Solution solution;
  ObjectiveVector objectives;
  double violation = 0.0;
  int rank = 0;          // 1-based front index
  double crowding = 0.0;
};

struct ParetoArchive {
  std::vector<ArchiveMember> members;
};

// Ranks and crowding for a raw member set; order preserved.
void annotate_ranks(ParetoArchive& archive);

// Keep only the first front, annotated.
ParetoArchive nondominated_filter(ParetoArchive archive);

// Cap the archive at `capacity` by rank, then crowding (descending), breaking
// ties toward lower member index.
void truncate(ParetoArchive& archive, std::size_t capacity);

}  // namespace uswarm
