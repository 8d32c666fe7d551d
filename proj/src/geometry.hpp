#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace uswarm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Axis-aligned rectangle, the 2D footprint of the mission area.
struct Rect {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double diagonal() const;
  bool contains(const Point2& p, double tol = 0.0) const {
    return p.x >= x_min - tol && p.x <= x_max + tol && p.y >= y_min - tol && p.y <= y_max + tol;
  }
};

double distance(const Point2& a, const Point2& b);
double distance(const Point3& a, const Point3& b);

// Elevation angle in degrees seen from `gu` toward `uav`; requires uav.z > gu.z.
// A link straight overhead returns exactly 90.
double elevation_angle_deg(const Point3& gu, const Point3& uav);

struct ClusterAssignment {
  std::vector<Point2> centers;
  std::vector<int> labels;  // point index -> center index
  double inertia = 0.0;     // sum of squared point-to-center distances
  int iterations = 0;
  std::vector<double> inertia_history;  // one entry per iteration, non-increasing
};

// Lloyd's algorithm with k-means++ seeding. Deterministic for a given seed.
// An empty cluster is reseeded at the point farthest from its assigned center.
ClusterAssignment kmeans(std::span<const Point2> points, int k, std::uint64_t seed,
                         int max_iters = 300);

struct VoronoiDiagram {
  std::vector<Point2> seeds;
  std::vector<std::vector<Point2>> cells;  // per-seed CCW polygon clipped to the box
  std::vector<Point2> vertices;            // interior vertices + cell-edge/box crossings, sorted by (x, y)
};

// Bounded Voronoi diagram: each cell is the box clipped against the bisector
// half-planes of all other seeds. Throws on duplicate seeds or seeds outside
// the box. Collinear seeds are fine (vertices land on the box edges only).
VoronoiDiagram voronoi(std::span<const Point2> seeds, const Rect& box);

// Geometric median (Fermat point) by the Vardi-Zhang variant of Weiszfeld's
// iteration, which handles iterates landing on an input point. Returns the
// input itself for a singleton.
Point2 geometric_median(std::span<const Point2> points, double tol = 1e-9, int max_iters = 2000);

// Objective minimized by geometric_median: sum of distances to the points.
double sum_of_distances(const Point2& candidate, std::span<const Point2> points);

}  // namespace uswarm
