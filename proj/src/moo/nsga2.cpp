#include "moo/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "util/parallel.hpp"

namespace uswarm {

namespace {

// Flat genome layout: [keys per T-UAV | (z, dx, dy) per candidate | p_u per GU
// | p_m per T-UAV].
struct Layout {
  std::vector<std::size_t> key_offset;    // per tuav
  std::vector<std::size_t> hover_offset;  // per tuav, 3 slots per candidate
  std::size_t gu_power_offset = 0;
  std::size_t relay_power_offset = 0;
  std::size_t dims = 0;
};

Layout make_layout(const Deployment& dep, std::size_t num_gus) {
  Layout layout;
  std::size_t at = 0;
  for (const TuavPlan& plan : dep.tuavs) {
    layout.key_offset.push_back(at);
    at += plan.candidates.size();
  }
  for (const TuavPlan& plan : dep.tuavs) {
    layout.hover_offset.push_back(at);
    at += 3 * plan.candidates.size();
  }
  layout.gu_power_offset = at;
  at += num_gus;
  layout.relay_power_offset = at;
  at += dep.tuavs.size();
  layout.dims = at;
  return layout;
}

DimBounds make_bounds(const Layout& layout, const Scenario& sc, const Deployment& dep,
                      double offset_radius) {
  DimBounds b;
  b.lo.assign(layout.dims, 0.0);
  b.hi.assign(layout.dims, 1.0);
  for (std::size_t m = 0; m < dep.tuavs.size(); ++m) {
    const std::size_t count = dep.tuavs[m].candidates.size();
    for (std::size_t n = 0; n < count; ++n) {
      const std::size_t at = layout.hover_offset[m] + 3 * n;
      b.lo[at] = sc.bounds.tuav_z_min;
      b.hi[at] = sc.bounds.tuav_z_max;
      b.lo[at + 1] = b.lo[at + 2] = -offset_radius;
      b.hi[at + 1] = b.hi[at + 2] = offset_radius;
    }
  }
  for (std::size_t u = 0; u < sc.gus.size(); ++u) {
    b.lo[layout.gu_power_offset + u] = sc.channel.p_u_min;
    b.hi[layout.gu_power_offset + u] = sc.channel.p_u_max;
  }
  for (std::size_t m = 0; m < dep.tuavs.size(); ++m) {
    b.lo[layout.relay_power_offset + m] = sc.channel.p_m_min;
    b.hi[layout.relay_power_offset + m] = sc.channel.p_m_max;
  }
  return b;
}

Solution decode(const Layout& layout, const std::vector<double>& genome, const Scenario& sc,
                const Deployment& dep) {
  Solution sol;
  const Rect rect = sc.bounds.rect();
  sol.orderings.resize(dep.tuavs.size());
  sol.hover_points.resize(dep.tuavs.size());
  for (std::size_t m = 0; m < dep.tuavs.size(); ++m) {
    const std::size_t count = dep.tuavs[m].candidates.size();
    // Random-key decoding: visit candidates in ascending key order.
    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return genome[layout.key_offset[m] + static_cast<std::size_t>(a)] <
             genome[layout.key_offset[m] + static_cast<std::size_t>(b)];
    });
    sol.orderings[m] = std::move(order);

    sol.hover_points[m].resize(count);
    for (std::size_t n = 0; n < count; ++n) {
      const std::size_t at = layout.hover_offset[m] + 3 * n;
      const Point2& fermat = dep.tuavs[m].candidates[n].point;
      sol.hover_points[m][n] = {std::clamp(fermat.x + genome[at + 1], rect.x_min, rect.x_max),
                                std::clamp(fermat.y + genome[at + 2], rect.y_min, rect.y_max),
                                genome[at]};
    }
  }
  sol.gu_powers.assign(genome.begin() + static_cast<long>(layout.gu_power_offset),
                       genome.begin() + static_cast<long>(layout.gu_power_offset + sc.gus.size()));
  sol.relay_powers.assign(
      genome.begin() + static_cast<long>(layout.relay_power_offset),
      genome.begin() + static_cast<long>(layout.relay_power_offset + dep.tuavs.size()));
  return sol;
}

void sbx_crossover(const std::vector<double>& a, const std::vector<double>& b,
                   std::vector<double>& child1, std::vector<double>& child2, double eta,
                   const DimBounds& bounds, Rng& rng) {
  child1 = a;
  child2 = b;
  if (rng.uniform() > 0.9) return;  // crossover probability
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (rng.uniform() > 0.5) continue;
    if (std::abs(a[d] - b[d]) < 1e-14) continue;
    const double u = rng.uniform();
    const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
    const double c1 = 0.5 * ((1.0 + beta) * a[d] + (1.0 - beta) * b[d]);
    const double c2 = 0.5 * ((1.0 - beta) * a[d] + (1.0 + beta) * b[d]);
    child1[d] = std::clamp(c1, bounds.lo[d], bounds.hi[d]);
    child2[d] = std::clamp(c2, bounds.lo[d], bounds.hi[d]);
  }
}

void polynomial_mutation(std::vector<double>& genome, double eta, const DimBounds& bounds,
                         Rng& rng) {
  const double rate = 1.0 / static_cast<double>(genome.size());
  for (std::size_t d = 0; d < genome.size(); ++d) {
    if (rng.uniform() > rate) continue;
    const double span = bounds.hi[d] - bounds.lo[d];
    if (span <= 0.0) continue;
    const double u = rng.uniform();
    const double delta = u < 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0
                                 : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
    genome[d] = std::clamp(genome[d] + delta * span, bounds.lo[d], bounds.hi[d]);
  }
}

struct Scored {
  ObjectiveVector objectives;
  double violation = 0.0;
  int rank = 0;
  double crowding = 0.0;
};

void rank_population(std::vector<Scored>& scored) {
  std::vector<ObjectiveVector> objectives;
  std::vector<double> violations;
  objectives.reserve(scored.size());
  violations.reserve(scored.size());
  for (const Scored& s : scored) {
    objectives.push_back(s.objectives);
    violations.push_back(s.violation);
  }
  const auto fronts = fast_nondominated_sort(objectives, violations);
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<ObjectiveVector> front_objs;
    front_objs.reserve(fronts[f].size());
    for (int idx : fronts[f]) front_objs.push_back(objectives[static_cast<std::size_t>(idx)]);
    const auto crowd = crowding_distance(front_objs);
    for (std::size_t i = 0; i < fronts[f].size(); ++i) {
      scored[static_cast<std::size_t>(fronts[f][i])].rank = static_cast<int>(f) + 1;
      scored[static_cast<std::size_t>(fronts[f][i])].crowding = crowd[i];
    }
  }
}

}  // namespace

OptimizeResult nsga2(const Scenario& scenario, const Deployment& deployment,
                     const Nsga2Params& params) {
  if (params.population < 4 || params.population % 2 != 0)
    throw ConfigError("nsga2: population must be even and >= 4");

  const Layout layout = make_layout(deployment, scenario.gus.size());
  if (layout.dims == 0) throw ConfigError("nsga2: deployment has no decision variables");
  const DimBounds bounds = make_bounds(layout, scenario, deployment, params.offset_radius);

  int generations = params.generations;
  if (generations <= 0) {
    if (params.eval_budget <= 0)
      throw ConfigError("nsga2: need generations or an eval budget");
    generations = static_cast<int>(params.eval_budget / params.population) - 1;
    if (generations < 1) throw ConfigError("nsga2: eval budget too small for the population");
  }

  ThreadPool pool(params.threads);
  Rng root = Rng(params.seed).child(0x6e736761);

  const auto population = static_cast<std::size_t>(params.population);
  std::vector<std::vector<double>> genomes(population, std::vector<double>(layout.dims));
  for (std::size_t j = 0; j < population; ++j) {
    Rng stream = root.child(0, j);
    for (std::size_t d = 0; d < layout.dims; ++d)
      genomes[j][d] = stream.uniform(bounds.lo[d], bounds.hi[d]);
  }

  long evaluations = 0;
  auto score_all = [&](const std::vector<std::vector<double>>& pop, std::vector<Scored>& out) {
    out.resize(pop.size());
    pool.parallel_for(pop.size(), [&](std::size_t j) {
      const Solution sol = decode(layout, pop[j], scenario, deployment);
      const Evaluation eval = evaluate(scenario, deployment, sol);
      out[j].objectives = eval.objectives;
      out[j].violation = eval.link_infeasible
                             ? std::numeric_limits<double>::infinity()
                             : feasibility(scenario, deployment, sol).violation;
    });
    evaluations += static_cast<long>(pop.size());
  };

  std::vector<Scored> scored;
  score_all(genomes, scored);
  rank_population(scored);

  auto tournament = [&](Rng& rng) -> std::size_t {
    const std::size_t a = rng.index(population);
    const std::size_t b = rng.index(population);
    if (scored[a].rank != scored[b].rank) return scored[a].rank < scored[b].rank ? a : b;
    if (scored[a].crowding != scored[b].crowding)
      return scored[a].crowding > scored[b].crowding ? a : b;
    return std::min(a, b);
  };

  for (int gen = 1; gen <= generations; ++gen) {
    Rng gen_rng = root.child(1, static_cast<std::uint64_t>(gen));
    std::vector<std::vector<double>> offspring;
    offspring.reserve(population);
    while (offspring.size() < population) {
      const std::size_t pa = tournament(gen_rng);
      const std::size_t pb = tournament(gen_rng);
      std::vector<double> c1, c2;
      sbx_crossover(genomes[pa], genomes[pb], c1, c2, params.sbx_eta, bounds, gen_rng);
      polynomial_mutation(c1, params.mutation_eta, bounds, gen_rng);
      polynomial_mutation(c2, params.mutation_eta, bounds, gen_rng);
      offspring.push_back(std::move(c1));
      if (offspring.size() < population) offspring.push_back(std::move(c2));
    }

    std::vector<Scored> offspring_scored;
    score_all(offspring, offspring_scored);

    // Environmental selection over parents + offspring.
    std::vector<std::vector<double>> merged = std::move(genomes);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
    std::vector<Scored> merged_scored = std::move(scored);
    merged_scored.insert(merged_scored.end(), offspring_scored.begin(), offspring_scored.end());
    rank_population(merged_scored);

    std::vector<int> order(merged.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const Scored& sa = merged_scored[static_cast<std::size_t>(a)];
      const Scored& sb = merged_scored[static_cast<std::size_t>(b)];
      if (sa.rank != sb.rank) return sa.rank < sb.rank;
      return sa.crowding > sb.crowding;
    });

    genomes.clear();
    scored.clear();
    for (std::size_t i = 0; i < population; ++i) {
      genomes.push_back(std::move(merged[static_cast<std::size_t>(order[i])]));
      scored.push_back(merged_scored[static_cast<std::size_t>(order[i])]);
    }
    rank_population(scored);
  }

  ParetoArchive archive;
  archive.members.reserve(population);
  for (std::size_t j = 0; j < population; ++j) {
    ArchiveMember member;
    member.solution = decode(layout, genomes[j], scenario, deployment);
    member.objectives = scored[j].objectives;
    member.violation = scored[j].violation;
    archive.members.push_back(std::move(member));
  }

  OptimizeResult result;
  result.archive = nondominated_filter(std::move(archive));
  truncate(result.archive, population);
  result.evaluations = evaluations;
  result.iterations_used = generations;
  return result;
}

}  // namespace uswarm
