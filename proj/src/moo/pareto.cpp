#include "moo/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace uswarm {

namespace {

bool objective_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  bool strictly_better = false;
  for (int k = 0; k < 3; ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strictly_better = true;
  }
  return strictly_better;
}

}  // namespace

bool dominates(const ObjectiveVector& a, double violation_a, const ObjectiveVector& b,
               double violation_b) {
  const bool feasible_a = violation_a <= 0.0;
  const bool feasible_b = violation_b <= 0.0;
  if (feasible_a && !feasible_b) return true;
  if (!feasible_a && feasible_b) return false;
  if (!feasible_a && !feasible_b) return violation_a < violation_b;
  return objective_dominates(a, b);
}

std::vector<std::vector<int>> fast_nondominated_sort(std::span<const ObjectiveVector> objectives,
                                                     std::span<const double> violations) {
  const std::size_t n = objectives.size();
  if (n == 0) throw std::invalid_argument("fast_nondominated_sort: empty population");
  if (!violations.empty() && violations.size() != n)
    throw std::invalid_argument("fast_nondominated_sort: violation count mismatch");
  auto viol = [&](std::size_t i) { return violations.empty() ? 0.0 : violations[i]; };

  std::vector<std::vector<int>> dominated(n);
  std::vector<int> dominators(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominates(objectives[i], viol(i), objectives[j], viol(j))) {
        dominated[i].push_back(static_cast<int>(j));
        ++dominators[j];
      } else if (dominates(objectives[j], viol(j), objectives[i], viol(i))) {
        dominated[j].push_back(static_cast<int>(i));
        ++dominators[i];
      }
    }
  }

  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (std::size_t i = 0; i < n; ++i)
    if (dominators[i] == 0) current.push_back(static_cast<int>(i));
  while (!current.empty()) {
    fronts.push_back(current);
    std::vector<int> next;
    for (int i : current)
      for (int j : dominated[static_cast<std::size_t>(i)])
        if (--dominators[static_cast<std::size_t>(j)] == 0) next.push_back(j);
    std::sort(next.begin(), next.end());
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const ObjectiveVector> front) {
  const std::size_t n = front.size();
  if (n == 0) throw std::invalid_argument("crowding_distance: empty front");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }

  std::vector<int> order(n);
  for (int k = 0; k < 3; ++k) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return front[static_cast<std::size_t>(a)][k] < front[static_cast<std::size_t>(b)][k];
    });
    const double lo = front[static_cast<std::size_t>(order.front())][k];
    const double hi = front[static_cast<std::size_t>(order.back())][k];
    dist[static_cast<std::size_t>(order.front())] = inf;
    dist[static_cast<std::size_t>(order.back())] = inf;
    if (hi <= lo) continue;  // degenerate objective
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double gap = front[static_cast<std::size_t>(order[i + 1])][k] -
                         front[static_cast<std::size_t>(order[i - 1])][k];
      dist[static_cast<std::size_t>(order[i])] += gap / (hi - lo);
    }
  }
  return dist;
}

double hypervolume(std::span<const ObjectiveVector> points, const ObjectiveVector& reference) {
  if (points.empty()) return 0.0;
  for (const ObjectiveVector& p : points)
    for (int k = 0; k < 3; ++k)
      if (p[k] > reference[k])
        throw std::invalid_argument("hypervolume: point beyond the reference");

  // Sweep distinct f3 levels; between consecutive levels the dominated slice
  // is the union of rectangles [f1, ref1] x [f2, ref2] of points at or below
  // the level, whose area is a staircase.
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return points[static_cast<std::size_t>(a)].adg_s < points[static_cast<std::size_t>(b)].adg_s;
  });

  auto staircase_area = [&](const std::vector<std::size_t>& active) {
    std::vector<std::pair<double, double>> pts;  // (f1, f2)
    pts.reserve(active.size());
    for (std::size_t i : active) pts.emplace_back(points[i].teu_j, points[i].aeg_j);
    std::sort(pts.begin(), pts.end());
    // Keep the staircase: strictly decreasing f2 as f1 grows; the rest are
    // dominated within the slice.
    std::vector<std::pair<double, double>> stair;
    double best_f2 = reference.aeg_j;
    for (const auto& p : pts) {
      if (p.second >= best_f2) continue;
      stair.push_back(p);
      best_f2 = p.second;
    }
    double area = 0.0;
    for (std::size_t i = 0; i < stair.size(); ++i) {
      const double next_f1 = i + 1 < stair.size() ? stair[i + 1].first : reference.teu_j;
      area += (next_f1 - stair[i].first) * (reference.aeg_j - stair[i].second);
    }
    return area;
  };

  double volume = 0.0;
  std::vector<std::size_t> active;
  std::size_t i = 0;
  while (i < order.size()) {
    const double level = points[static_cast<std::size_t>(order[i])].adg_s;
    while (i < order.size() && points[static_cast<std::size_t>(order[i])].adg_s == level) {
      active.push_back(static_cast<std::size_t>(order[i]));
      ++i;
    }
    const double next_level =
        i < order.size() ? points[static_cast<std::size_t>(order[i])].adg_s : reference.adg_s;
    volume += staircase_area(active) * (next_level - level);
  }
  return volume;
}

void annotate_ranks(ParetoArchive& archive) {
  if (archive.members.empty()) return;
  std::vector<ObjectiveVector> objectives;
  std::vector<double> violations;
  objectives.reserve(archive.members.size());
  violations.reserve(archive.members.size());
  for (const ArchiveMember& m : archive.members) {
    objectives.push_back(m.objectives);
    violations.push_back(m.violation);
  }

  const auto fronts = fast_nondominated_sort(objectives, violations);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<ObjectiveVector> front_objs;
    front_objs.reserve(fronts[f].size());
    for (int idx : fronts[f]) front_objs.push_back(objectives[static_cast<std::size_t>(idx)]);
    const std::vector<double> crowd = crowding_distance(front_objs);
    for (std::size_t i = 0; i < fronts[f].size(); ++i) {
      ArchiveMember& m = archive.members[static_cast<std::size_t>(fronts[f][i])];
      m.rank = static_cast<int>(f) + 1;
      m.crowding = crowd[i];
    }
  }
}

ParetoArchive nondominated_filter(ParetoArchive archive) {
  if (archive.members.empty()) return archive;
  annotate_ranks(archive);
  ParetoArchive out;
  for (ArchiveMember& m : archive.members)
    if (m.rank == 1) out.members.push_back(std::move(m));
  annotate_ranks(out);
  return out;
}

void truncate(ParetoArchive& archive, std::size_t capacity) {
  if (archive.members.size() <= capacity) return;
  annotate_ranks(archive);
  std::vector<int> order(archive.members.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const ArchiveMember& ma = archive.members[static_cast<std::size_t>(a)];
    const ArchiveMember& mb = archive.members[static_cast<std::size_t>(b)];
    if (ma.rank != mb.rank) return ma.rank < mb.rank;
    return ma.crowding > mb.crowding;
  });
  order.resize(capacity);
  std::sort(order.begin(), order.end());
  ParetoArchive kept;
  kept.members.reserve(capacity);
  for (int idx : order) kept.members.push_back(std::move(archive.members[static_cast<std::size_t>(idx)]));
  archive.members = std::move(kept.members);
  annotate_ranks(archive);
}

}  // namespace uswarm
