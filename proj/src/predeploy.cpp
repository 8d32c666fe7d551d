#include "predeploy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "rng.hpp"

namespace uswarm {

using nlohmann::json;

namespace {

// Exact min-cost assignment of centers to a fixed set of sites with per-site
// occupancy in [min_occupancy, cap]: DP over centers, state = packed per-site
// counts.
struct AssignmentResult {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> center_to_slot;
};

AssignmentResult assign_centers(const std::vector<std::vector<double>>& cost, int num_sites,
                                int cap, int min_occupancy) {
  const int num_centers = static_cast<int>(cost.size());
  const int base = cap + 1;
  std::size_t states = 1;
  for (int s = 0; s < num_sites; ++s) states *= static_cast<std::size_t>(base);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(states, inf);
  std::vector<std::vector<int>> choice(static_cast<std::size_t>(num_centers),
                                       std::vector<int>(states, -1));
  dp[0] = 0.0;

  std::vector<double> next(states);
  std::vector<std::size_t> pow(static_cast<std::size_t>(num_sites));
  pow[0] = 1;
  for (int s = 1; s < num_sites; ++s) pow[static_cast<std::size_t>(s)] = pow[static_cast<std::size_t>(s - 1)] * static_cast<std::size_t>(base);

  for (int t = 0; t < num_centers; ++t) {
    std::fill(next.begin(), next.end(), inf);
    for (std::size_t st = 0; st < states; ++st) {
      if (dp[st] == inf) continue;
      for (int s = 0; s < num_sites; ++s) {
        const int count = static_cast<int>(st / pow[static_cast<std::size_t>(s)]) % base;
        if (count >= cap) continue;
        const std::size_t ns = st + pow[static_cast<std::size_t>(s)];
        const double c = dp[st] + cost[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)];
        if (c < next[ns]) {
          next[ns] = c;
          choice[static_cast<std::size_t>(t)][ns] = s;
        }
      }
    }
    dp.swap(next);
  }

  AssignmentResult out;
  std::size_t best_state = 0;
  for (std::size_t st = 0; st < states; ++st) {
    if (dp[st] == inf) continue;
    bool occupied = true;
    for (int s = 0; s < num_sites; ++s)
      if (static_cast<int>(st / pow[static_cast<std::size_t>(s)]) % base < min_occupancy)
        occupied = false;
    if (occupied && dp[st] < out.cost) {
      out.cost = dp[st];
      best_state = st;
    }
  }
  if (!std::isfinite(out.cost)) return out;

  out.center_to_slot.assign(static_cast<std::size_t>(num_centers), -1);
  std::size_t st = best_state;
  for (int t = num_centers - 1; t >= 0; --t) {
    const int s = choice[static_cast<std::size_t>(t)][st];
    out.center_to_slot[static_cast<std::size_t>(t)] = s;
    st -= pow[static_cast<std::size_t>(s)];
  }
  return out;
}

}  // namespace

std::vector<int> select_swarm_sites(const VoronoiDiagram& diagram,
                                    std::span<const Point2> centers, int num_swarms,
                                    int max_per_site, std::vector<int>* center_to_site) {
  const int num_vertices = static_cast<int>(diagram.vertices.size());
  const int num_centers = static_cast<int>(centers.size());
  if (num_swarms < 1) throw ConfigError("select_swarm_sites: need at least one swarm");
  if (num_vertices < num_swarms)
    throw ConfigError("select_swarm_sites: diagram has fewer vertices than swarms");
  if (num_centers > num_swarms * max_per_site)
    throw ConfigError("select_swarm_sites: capacity cannot cover all subregions");
  // Every site must host a subregion whenever there are enough of them.
  const int min_occupancy = num_centers >= num_swarms ? 1 : 0;

  // Enumerate vertex subsets in lexicographic index order; strict improvement
  // keeps the lexicographically smallest subset on cost ties.
  std::vector<int> subset(static_cast<std::size_t>(num_swarms));
  for (int i = 0; i < num_swarms; ++i) subset[static_cast<std::size_t>(i)] = i;

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best_subset;
  std::vector<int> best_assignment;

  std::vector<std::vector<double>> cost(static_cast<std::size_t>(num_centers),
                                        std::vector<double>(static_cast<std::size_t>(num_swarms)));
  while (true) {
    for (int t = 0; t < num_centers; ++t)
      for (int s = 0; s < num_swarms; ++s)
        cost[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = distance(
            centers[static_cast<std::size_t>(t)],
            diagram.vertices[static_cast<std::size_t>(subset[static_cast<std::size_t>(s)])]);

    const AssignmentResult result = assign_centers(cost, num_swarms, max_per_site, min_occupancy);
    if (result.cost < best_cost) {
      best_cost = result.cost;
      best_subset = subset;
      best_assignment = result.center_to_slot;
    }

    // Next combination.
    int i = num_swarms - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == num_vertices - num_swarms + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < num_swarms; ++k)
      subset[static_cast<std::size_t>(k)] = subset[static_cast<std::size_t>(k - 1)] + 1;
  }

  if (!std::isfinite(best_cost))
    throw ConfigError("select_swarm_sites: no capacity-feasible assignment exists");
  if (center_to_site) *center_to_site = best_assignment;
  return best_subset;
}

std::vector<std::vector<int>> group_gus(std::span<const Point2> positions, int u_max,
                                        std::uint64_t seed) {
  if (positions.empty()) throw std::invalid_argument("group_gus: empty GU set");
  if (u_max < 1) throw ConfigError("group_gus: u_max must be >= 1");

  const int n = static_cast<int>(positions.size());
  const int k = (n + u_max - 1) / u_max;

  std::vector<std::vector<int>> groups(static_cast<std::size_t>(k));
  if (k == 1) {
    for (int i = 0; i < n; ++i) groups[0].push_back(i);
    return groups;
  }

  const ClusterAssignment clusters = kmeans(positions, k, seed);
  for (int i = 0; i < n; ++i)
    groups[static_cast<std::size_t>(clusters.labels[static_cast<std::size_t>(i)])].push_back(i);

  auto centroid = [&](const std::vector<int>& group) {
    Point2 c{0.0, 0.0};
    for (int i : group) {
      c.x += positions[static_cast<std::size_t>(i)].x;
      c.y += positions[static_cast<std::size_t>(i)].y;
    }
    c.x /= static_cast<double>(group.size());
    c.y /= static_cast<double>(group.size());
    return c;
  };

  // Capacity repair: each move strictly shrinks the total oversize, so this
  // finishes in at most n moves.
  while (true) {
    int oversized = -1;
    for (int g = 0; g < k; ++g)
      if (static_cast<int>(groups[static_cast<std::size_t>(g)].size()) > u_max) {
        oversized = g;
        break;
      }
    if (oversized < 0) break;

    const Point2 own = centroid(groups[static_cast<std::size_t>(oversized)]);
    int move_pos = 0;
    double far_d = -1.0;
    for (std::size_t p = 0; p < groups[static_cast<std::size_t>(oversized)].size(); ++p) {
      const int idx = groups[static_cast<std::size_t>(oversized)][p];
      const double d = distance(positions[static_cast<std::size_t>(idx)], own);
      if (d > far_d) {
        far_d = d;
        move_pos = static_cast<int>(p);
      }
    }
    const int moving = groups[static_cast<std::size_t>(oversized)][static_cast<std::size_t>(move_pos)];

    int target = -1;
    double near_d = std::numeric_limits<double>::infinity();
    for (int g = 0; g < k; ++g) {
      if (g == oversized ||
          static_cast<int>(groups[static_cast<std::size_t>(g)].size()) >= u_max)
        continue;
      const double d = distance(positions[static_cast<std::size_t>(moving)],
                                centroid(groups[static_cast<std::size_t>(g)]));
      if (d < near_d) {
        near_d = d;
        target = g;
      }
    }
    groups[static_cast<std::size_t>(oversized)].erase(
        groups[static_cast<std::size_t>(oversized)].begin() + move_pos);
    groups[static_cast<std::size_t>(target)].push_back(moving);
  }
  for (auto& g : groups) std::sort(g.begin(), g.end());
  return groups;
}

Deployment predeploy(const Scenario& scenario) {
  const FeasibilityNote note = validate_scenario(scenario);
  if (!note.ok()) {
    std::ostringstream msg;
    msg << "predeploy: invalid scenario:";
    for (const std::string& v : note.violations) msg << ' ' << v << ';';
    throw ConfigError(msg.str());
  }
  const int num_gus = static_cast<int>(scenario.gus.size());
  if (num_gus < scenario.num_tuavs)
    throw ConfigError("predeploy: fewer GUs than T-UAVs; cannot form subregions");
  if (scenario.num_swarms > scenario.num_tuavs)
    throw ConfigError("predeploy: more swarms than T-UAVs; a swarm would be empty");

  Deployment d;

  std::vector<Point2> gu_xy;
  gu_xy.reserve(static_cast<std::size_t>(num_gus));
  for (const GroundUser& gu : scenario.gus) gu_xy.push_back({gu.position.x, gu.position.y});

  const Rng root(scenario.seed);
  d.clusters = kmeans(gu_xy, scenario.num_tuavs, root.child(0x70726531).next_u64());

  std::vector<int> center_to_site;
  if (scenario.num_tuavs == 1) {
    // A single subregion covers the whole area; there is no diagram vertex to
    // site the swarm on, so it sits over the cluster center.
    const Rect rect = scenario.bounds.rect();
    d.diagram.seeds = d.clusters.centers;
    d.diagram.cells = {{{rect.x_min, rect.y_min},
                        {rect.x_max, rect.y_min},
                        {rect.x_max, rect.y_max},
                        {rect.x_min, rect.y_max}}};
    d.swarm_sites.push_back(
        {d.clusters.centers[0].x, d.clusters.centers[0].y, scenario.bounds.huav_altitude});
    center_to_site = {0};
  } else {
    d.diagram = voronoi(d.clusters.centers, scenario.bounds.rect());
    const std::vector<int> site_vertices = select_swarm_sites(
        d.diagram, d.clusters.centers, scenario.num_swarms, scenario.m_max, &center_to_site);
    d.swarm_sites.reserve(site_vertices.size());
    for (int v : site_vertices) {
      const Point2& p = d.diagram.vertices[static_cast<std::size_t>(v)];
      d.swarm_sites.push_back({p.x, p.y, scenario.bounds.huav_altitude});
    }
  }
  d.tuavs_per_swarm.assign(static_cast<std::size_t>(scenario.num_swarms), 0);

  d.connections.assignment.assign(static_cast<std::size_t>(num_gus), HoverRef{});
  d.tuavs.resize(static_cast<std::size_t>(scenario.num_tuavs));
  for (int m = 0; m < scenario.num_tuavs; ++m) {
    TuavPlan& plan = d.tuavs[static_cast<std::size_t>(m)];
    plan.swarm = center_to_site[static_cast<std::size_t>(m)];
    plan.subregion = m;
    ++d.tuavs_per_swarm[static_cast<std::size_t>(plan.swarm)];

    std::vector<int> member_ids;
    std::vector<Point2> member_xy;
    for (int i = 0; i < num_gus; ++i) {
      if (d.clusters.labels[static_cast<std::size_t>(i)] == m) {
        member_ids.push_back(i);
        member_xy.push_back(gu_xy[static_cast<std::size_t>(i)]);
      }
    }
    if (member_ids.empty()) continue;  // subregion with no GUs: T-UAV stays parked

    const auto groups =
        group_gus(member_xy, scenario.u_max, root.child(0x70726532, static_cast<std::uint64_t>(m)).next_u64());
    for (const auto& group : groups) {
      FermatGroup fg;
      std::vector<Point2> pts;
      pts.reserve(group.size());
      for (int local : group) {
        fg.members.push_back(member_ids[static_cast<std::size_t>(local)]);
        pts.push_back(member_xy[static_cast<std::size_t>(local)]);
      }
      fg.point = geometric_median(pts, 1e-9);
      const int candidate = static_cast<int>(plan.candidates.size());
      for (int id : fg.members)
        d.connections.assignment[static_cast<std::size_t>(id)] = HoverRef{m, candidate};
      plan.candidates.push_back(std::move(fg));
    }
  }
  return d;
}

void save_deployment(const Deployment& d, const std::string& path) {
  json j;
  j["format"] = "uswarm-deployment";
  j["version"] = 1;

  json sites = json::array();
  for (const Point3& s : d.swarm_sites) sites.push_back(json{{"x", s.x}, {"y", s.y}, {"z", s.z}});
  j["swarm_sites"] = std::move(sites);
  j["tuavs_per_swarm"] = d.tuavs_per_swarm;

  json tuavs = json::array();
  for (const TuavPlan& plan : d.tuavs) {
    json candidates = json::array();
    for (const FermatGroup& fg : plan.candidates)
      candidates.push_back(json{{"x", fg.point.x}, {"y", fg.point.y}, {"members", fg.members}});
    tuavs.push_back(json{{"swarm", plan.swarm},
                         {"subregion", plan.subregion},
                         {"candidates", std::move(candidates)}});
  }
  j["tuavs"] = std::move(tuavs);

  json centers = json::array();
  for (const Point2& c : d.clusters.centers) centers.push_back(json{{"x", c.x}, {"y", c.y}});
  j["cluster_centers"] = std::move(centers);
  j["cluster_labels"] = d.clusters.labels;

  json cells = json::array();
  for (const auto& cell : d.diagram.cells) {
    json poly = json::array();
    for (const Point2& p : cell) poly.push_back(json{{"x", p.x}, {"y", p.y}});
    cells.push_back(std::move(poly));
  }
  j["voronoi_cells"] = std::move(cells);
  json verts = json::array();
  for (const Point2& p : d.diagram.vertices) verts.push_back(json{{"x", p.x}, {"y", p.y}});
  j["voronoi_vertices"] = std::move(verts);
  json seeds = json::array();
  for (const Point2& p : d.diagram.seeds) seeds.push_back(json{{"x", p.x}, {"y", p.y}});
  j["voronoi_seeds"] = std::move(seeds);

  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

Deployment load_deployment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
  }
  if (j.value("format", "") != std::string("uswarm-deployment"))
    throw ParseError("key 'format' must be 'uswarm-deployment'");

  Deployment d;
  for (const json& s : j.at("swarm_sites"))
    d.swarm_sites.push_back({s.at("x").get<double>(), s.at("y").get<double>(), s.at("z").get<double>()});
  d.tuavs_per_swarm = j.at("tuavs_per_swarm").get<std::vector<int>>();

  int num_gus = 0;
  for (const json& t : j.at("tuavs")) {
    TuavPlan plan;
    plan.swarm = t.at("swarm").get<int>();
    plan.subregion = t.at("subregion").get<int>();
    for (const json& c : t.at("candidates")) {
      FermatGroup fg;
      fg.point = {c.at("x").get<double>(), c.at("y").get<double>()};
      fg.members = c.at("members").get<std::vector<int>>();
      for (int id : fg.members) num_gus = std::max(num_gus, id + 1);
      plan.candidates.push_back(std::move(fg));
    }
    d.tuavs.push_back(std::move(plan));
  }

  d.connections.assignment.assign(static_cast<std::size_t>(num_gus), HoverRef{});
  for (std::size_t m = 0; m < d.tuavs.size(); ++m)
    for (std::size_t n = 0; n < d.tuavs[m].candidates.size(); ++n)
      for (int id : d.tuavs[m].candidates[n].members)
        d.connections.assignment[static_cast<std::size_t>(id)] =
            HoverRef{static_cast<int>(m), static_cast<int>(n)};

  for (const json& c : j.at("cluster_centers"))
    d.clusters.centers.push_back({c.at("x").get<double>(), c.at("y").get<double>()});
  d.clusters.labels = j.at("cluster_labels").get<std::vector<int>>();
  for (const json& cell : j.at("voronoi_cells")) {
    std::vector<Point2> poly;
    for (const json& p : cell) poly.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
    d.diagram.cells.push_back(std::move(poly));
  }
  for (const json& p : j.at("voronoi_vertices"))
    d.diagram.vertices.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
  for (const json& p : j.at("voronoi_seeds"))
    d.diagram.seeds.push_back({p.at("x").get<double>(), p.at("y").get<double>()});
  return d;
}

}  // namespace uswarm
