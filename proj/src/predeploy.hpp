#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "scenario.hpp"

namespace uswarm {

// Where a GU uploads: T-UAV index and hover-candidate index within it.
struct HoverRef {
  int tuav = -1;
  int candidate = -1;
};

// One binding per GU, indexed by GU id.
struct ConnectionPlan {
  std::vector<HoverRef> assignment;
};

// A hover candidate: the Fermat point of its member GUs (2D; the optimizer
// picks the altitude) plus the member ids it serves.
struct FermatGroup {
  Point2 point;
  std::vector<int> members;
};

struct TuavPlan {
  int swarm = -1;
  int subregion = -1;  // Voronoi cell / cluster index served by this T-UAV
  std::vector<FermatGroup> candidates;
};

struct Deployment {
  std::vector<Point3> swarm_sites;  // at H-UAV altitude
  std::vector<int> tuavs_per_swarm;
  std::vector<TuavPlan> tuavs;
  ConnectionPlan connections;
  ClusterAssignment clusters;
  VoronoiDiagram diagram;

  int num_tuavs() const { return static_cast<int>(tuavs.size()); }
  int num_swarms() const { return static_cast<int>(swarm_sites.size()); }
};

// Swarm siting: choose `num_swarms` distinct diagram vertices and assign every
// cluster center to a chosen site so that the total center-to-site distance is
// minimal, subject to at most max_per_site centers per site and, when centers
// are plentiful, at least one per site. Exact search (subset enumeration +
// assignment DP); ties break toward lower vertex indices. Returns the chosen
// vertex indices; fills center_to_site when given.
std::vector<int> select_swarm_sites(const VoronoiDiagram& diagram,
                                    std::span<const Point2> centers, int num_swarms,
                                    int max_per_site, std::vector<int>* center_to_site = nullptr);

// Partition one subregion's GUs into ceil(n / u_max) groups by k-means, then
// repair capacity: repeatedly move the farthest member of the first oversized
// group to the under-capacity group with the nearest centroid. Returns groups
// of indices into `positions`; all non-empty, none larger than u_max.
std::vector<std::vector<int>> group_gus(std::span<const Point2> positions, int u_max,
                                        std::uint64_t seed);

// Algorithm: cluster GUs into M subregions, build the bounded Voronoi diagram,
// site swarms on its vertices, allocate one T-UAV per subregion, and lay one
// Fermat hover candidate per GU group. Deterministic for a given scenario.
Deployment predeploy(const Scenario& scenario);

void save_deployment(const Deployment& d, const std::string& path);
Deployment load_deployment(const std::string& path);

}  // namespace uswarm
