#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>

#include <doctest.h>

#include "predeploy.hpp"
#include "rng.hpp"

using namespace uswarm;

namespace {

Scenario make_scenario(int num_gus, int num_swarms, int num_tuavs, std::uint64_t seed) {
  GenerateOptions options;
  options.num_gus = num_gus;
  options.num_swarms = num_swarms;
  options.num_tuavs = num_tuavs;
  options.seed = seed;
  return generate_scenario(options);
}

// Exhaustive oracle for the swarm-siting subproblem: every vertex subset of
// size S crossed with every center-to-slot assignment, occupancy in [1, cap].
double brute_force_site_cost(const VoronoiDiagram& diagram, const std::vector<Point2>& centers,
                             int num_swarms, int cap) {
  const int num_vertices = static_cast<int>(diagram.vertices.size());
  const int num_centers = static_cast<int>(centers.size());
  std::vector<int> subset(static_cast<std::size_t>(num_swarms));
  for (int i = 0; i < num_swarms; ++i) subset[static_cast<std::size_t>(i)] = i;

  double best = std::numeric_limits<double>::infinity();
  while (true) {
    // Enumerate assignments in base num_swarms.
    long total = 1;
    for (int t = 0; t < num_centers; ++t) total *= num_swarms;
    for (long code = 0; code < total; ++code) {
      long rest = code;
      std::vector<int> counts(static_cast<std::size_t>(num_swarms), 0);
      double cost = 0.0;
      for (int t = 0; t < num_centers; ++t) {
        const int slot = static_cast<int>(rest % num_swarms);
        rest /= num_swarms;
        ++counts[static_cast<std::size_t>(slot)];
        cost += distance(centers[static_cast<std::size_t>(t)],
                         diagram.vertices[static_cast<std::size_t>(subset[static_cast<std::size_t>(slot)])]);
      }
      bool ok = true;
      for (int c : counts)
        if (c == 0 || c > cap) ok = false;
      if (ok) best = std::min(best, cost);
    }

    int i = num_swarms - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == num_vertices - num_swarms + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < num_swarms; ++k)
      subset[static_cast<std::size_t>(k)] = subset[static_cast<std::size_t>(k - 1)] + 1;
  }
  return best;
}

bool point_in_convex_cell(const Point2& p, const std::vector<Point2>& poly, double tol) {
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross < -tol) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("predeploy") {

TEST_CASE("stock scenario allocation is forced to {3,3,2}") {
  const Scenario s = make_scenario(60, 3, 8, 7);
  const Deployment d = predeploy(s);
  REQUIRE(d.tuavs_per_swarm.size() == 3);
  std::multiset<int> allocation(d.tuavs_per_swarm.begin(), d.tuavs_per_swarm.end());
  CHECK(allocation == std::multiset<int>({2, 3, 3}));
  int total = 0;
  for (int m : d.tuavs_per_swarm) total += m;
  CHECK(total == 8);
}

TEST_CASE("capacity-exact group and forced split") {
  {
    const Scenario s = make_scenario(6, 1, 1, 3);
    const Deployment d = predeploy(s);
    REQUIRE(d.tuavs.size() == 1);
    REQUIRE(d.tuavs[0].candidates.size() == 1);
    CHECK(d.tuavs[0].candidates[0].members.size() == 6);
  }
  {
    const Scenario s = make_scenario(7, 1, 1, 3);
    const Deployment d = predeploy(s);
    REQUIRE(d.tuavs.size() == 1);
    REQUIRE(d.tuavs[0].candidates.size() == 2);
    std::size_t covered = 0;
    for (const FermatGroup& g : d.tuavs[0].candidates) {
      CHECK(g.members.size() >= 1);
      CHECK(g.members.size() <= 6);
      covered += g.members.size();
    }
    CHECK(covered == 7);
  }
}

TEST_CASE("select_swarm_sites basics") {
  // All vertices needed: S == |vertices|.
  std::vector<Point2> seeds = {{2, 2}, {8, 2}, {5, 7}};
  const Rect box{0, 10, 0, 10};
  const VoronoiDiagram d = voronoi(seeds, box);
  const int all = static_cast<int>(d.vertices.size());
  const auto chosen = select_swarm_sites(d, seeds, all, 3);
  CHECK(static_cast<int>(chosen.size()) == all);
  std::set<int> unique(chosen.begin(), chosen.end());
  CHECK(static_cast<int>(unique.size()) == all);
}

TEST_CASE("symmetric square prefers the central vertex") {
  std::vector<Point2> seeds = {{2, 2}, {8, 2}, {2, 8}, {8, 8}};
  const Rect box{0, 10, 0, 10};
  const VoronoiDiagram d = voronoi(seeds, box);
  std::vector<int> center_to_site;
  const auto chosen = select_swarm_sites(d, seeds, 1, 4, &center_to_site);
  REQUIRE(chosen.size() == 1);
  const Point2& site = d.vertices[static_cast<std::size_t>(chosen[0])];
  CHECK(site.x == doctest::Approx(5.0));
  CHECK(site.y == doctest::Approx(5.0));
  CHECK(center_to_site == std::vector<int>({0, 0, 0, 0}));
}

TEST_CASE("site selection matches the exhaustive oracle") {
  Rng rng(77);
  for (int inst = 0; inst < 5; ++inst) {
    std::vector<Point2> centers;
    for (int i = 0; i < 8; ++i)
      centers.push_back({rng.uniform(100, 1900), rng.uniform(100, 1900)});
    const Rect box{0, 2000, 0, 2000};
    const VoronoiDiagram d = voronoi(centers, box);
    std::vector<int> center_to_site;
    const auto chosen = select_swarm_sites(d, centers, 3, 3, &center_to_site);
    double cost = 0.0;
    for (std::size_t t = 0; t < centers.size(); ++t)
      cost += distance(centers[t],
                       d.vertices[static_cast<std::size_t>(
                           chosen[static_cast<std::size_t>(center_to_site[t])])]);
    const double oracle = brute_force_site_cost(d, centers, 3, 3);
    CHECK(cost == doctest::Approx(oracle).epsilon(1e-9));
    // Occupancy within [1, 3].
    std::map<int, int> counts;
    for (int slot : center_to_site) ++counts[slot];
    for (const auto& [slot, count] : counts) {
      CHECK(count >= 1);
      CHECK(count <= 3);
    }
  }
}

TEST_CASE("group_gus splits blobs and respects capacity") {
  {
    std::vector<Point2> three = {{0, 0}, {5, 0}, {0, 5}};
    const auto groups = group_gus(three, 6, 1);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].size() == 3);
  }
  {
    // Two tight blobs of six: the split must be the blobs themselves.
    std::vector<Point2> pts;
    Rng rng(3);
    for (int i = 0; i < 6; ++i) pts.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    for (int i = 0; i < 6; ++i)
      pts.push_back({1000 + rng.uniform(-5, 5), 1000 + rng.uniform(-5, 5)});
    const auto groups = group_gus(pts, 6, 9);
    REQUIRE(groups.size() == 2);
    for (const auto& g : groups) {
      CHECK(g.size() == 6);
      const bool left = g[0] < 6;
      for (int idx : g) CHECK((idx < 6) == left);
    }
  }
  {
    // Random instances: groups non-empty, within capacity, covering everything.
    Rng rng(41);
    for (int inst = 0; inst < 20; ++inst) {
      std::vector<Point2> pts;
      const int n = 1 + static_cast<int>(rng.index(40));
      for (int i = 0; i < n; ++i) pts.push_back({rng.uniform(0, 300), rng.uniform(0, 300)});
      const auto groups = group_gus(pts, 6, inst);
      std::set<int> seen;
      for (const auto& g : groups) {
        CHECK(!g.empty());
        CHECK(g.size() <= 6);
        for (int idx : g) CHECK(seen.insert(idx).second);
      }
      CHECK(static_cast<int>(seen.size()) == n);
      CHECK(groups.size() == static_cast<std::size_t>((n + 5) / 6));
    }
  }
}

TEST_CASE("structural feasibility over 100 random scenarios") {
  Rng rng(2024);
  for (int inst = 0; inst < 100; ++inst) {
    const int swarms = 1 + static_cast<int>(rng.index(4));
    const int m_max = 2 + static_cast<int>(rng.index(3));
    const int max_tuavs = swarms * m_max;
    const int tuavs =
        std::max(swarms, 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_tuavs))));
    const int gus = tuavs + static_cast<int>(rng.index(80));

    GenerateOptions options;
    options.num_gus = gus;
    options.num_swarms = swarms;
    options.num_tuavs = tuavs;
    options.m_max = m_max;
    options.seed = 5000 + static_cast<std::uint64_t>(inst);
    const Scenario s = generate_scenario(options);
    const Deployment d = predeploy(s);

    // Allocation: sum M_s = M, M_s <= M_max, every swarm non-empty.
    int total = 0;
    for (int m : d.tuavs_per_swarm) {
      CHECK(m >= 1);
      CHECK(m <= m_max);
      total += m;
    }
    CHECK(total == tuavs);

    // Connection plan: each GU exactly once, capacity respected.
    std::map<std::pair<int, int>, int> load;
    for (int u = 0; u < gus; ++u) {
      const HoverRef ref = d.connections.assignment[static_cast<std::size_t>(u)];
      REQUIRE(ref.tuav >= 0);
      REQUIRE(ref.tuav < tuavs);
      REQUIRE(ref.candidate >= 0);
      REQUIRE(ref.candidate <
              static_cast<int>(d.tuavs[static_cast<std::size_t>(ref.tuav)].candidates.size()));
      ++load[{ref.tuav, ref.candidate}];
    }
    for (const auto& [key, count] : load) CHECK(count <= s.u_max);

    // Every Fermat candidate sits inside the box and its own subregion cell.
    for (std::size_t m = 0; m < d.tuavs.size(); ++m) {
      for (const FermatGroup& g : d.tuavs[m].candidates) {
        CHECK(s.bounds.rect().contains(g.point, 1e-6));
        CHECK(point_in_convex_cell(g.point, d.diagram.cells[m], 1e-6));
      }
    }
  }
}

TEST_CASE("deterministic deployment and persistence round-trip") {
  const Scenario s = make_scenario(40, 3, 6, 99);
  const Deployment a = predeploy(s);
  const Deployment b = predeploy(s);

  const std::string path_a = (std::filesystem::temp_directory_path() / "uswarm_dep_a.json").string();
  const std::string path_b = (std::filesystem::temp_directory_path() / "uswarm_dep_b.json").string();
  save_deployment(a, path_a);
  save_deployment(b, path_b);
  std::ifstream fa(path_a), fb(path_b);
  const std::string da((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string db((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(da == db);

  const Deployment loaded = load_deployment(path_a);
  CHECK(loaded.tuavs.size() == a.tuavs.size());
  CHECK(loaded.connections.assignment.size() == a.connections.assignment.size());
  for (std::size_t u = 0; u < a.connections.assignment.size(); ++u) {
    CHECK(loaded.connections.assignment[u].tuav == a.connections.assignment[u].tuav);
    CHECK(loaded.connections.assignment[u].candidate == a.connections.assignment[u].candidate);
  }
  std::remove(path_a.c_str());
  std::remove(path_b.c_str());
}

TEST_CASE("predeploy configuration errors") {
  CHECK_THROWS_AS(predeploy(make_scenario(5, 1, 8, 1)), ConfigError);  // fewer GUs than T-UAVs
  GenerateOptions options;
  options.num_gus = 20;
  options.num_swarms = 4;
  options.num_tuavs = 3;
  CHECK_THROWS_AS(predeploy(generate_scenario(options)), ConfigError);  // swarm would be empty
}

}  // TEST_SUITE
