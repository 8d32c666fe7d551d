#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "rng.hpp"

namespace uswarm {

double Rect::diagonal() const { return std::hypot(width(), height()); }

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double distance(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

double elevation_angle_deg(const Point3& gu, const Point3& uav) {
  const double dz = uav.z - gu.z;
  if (!(dz > 0.0)) throw std::invalid_argument("elevation_angle_deg: uav must be above gu");
  const double horiz = std::hypot(uav.x - gu.x, uav.y - gu.y);
  if (horiz == 0.0) return 90.0;
  return 180.0 / std::numbers::pi * std::atan(dz / horiz);
}

namespace {

double sq_dist(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// k-means++ seeding: first center uniform, then proportional to squared
// distance from the nearest already-chosen center.
std::vector<Point2> seed_centers(std::span<const Point2> points, int k, Rng& rng) {
  const std::size_t n = points.size();
  std::vector<Point2> centers;
  centers.reserve(static_cast<std::size_t>(k));
  centers.push_back(points[rng.index(n)]);

  std::vector<double> d2(n);
  while (centers.size() < static_cast<std::size_t>(k)) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point2& c : centers) best = std::min(best, sq_dist(points[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      // All mass at zero (duplicated points): take the first point not yet chosen.
      for (std::size_t i = 0; i < n; ++i) {
        if (std::none_of(centers.begin(), centers.end(), [&](const Point2& c) {
              return c.x == points[i].x && c.y == points[i].y;
            })) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(points[pick]);
  }
  return centers;
}

}  // namespace

ClusterAssignment kmeans(std::span<const Point2> points, int k, std::uint64_t seed,
                         int max_iters) {
  const std::size_t n = points.size();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (static_cast<std::size_t>(k) > n) throw std::invalid_argument("kmeans: k exceeds point count");

  Rng rng(seed);
  ClusterAssignment out;
  out.centers = seed_centers(points, k, rng);
  out.labels.assign(n, -1);

  auto assign = [&](std::vector<int>& labels) {
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sq_dist(points[i], out.centers[0]);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(points[i], out.centers[static_cast<std::size_t>(c)]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      labels[i] = best;
    }
  };

  std::vector<int> labels(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    assign(labels);

    // Recompute centers; reseed any empty cluster at the point farthest from
    // its assigned center (lowest index wins ties).
    std::vector<Point2> sums(static_cast<std::size_t>(k));
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[static_cast<std::size_t>(labels[i])].x += points[i].x;
      sums[static_cast<std::size_t>(labels[i])].y += points[i].y;
      ++counts[static_cast<std::size_t>(labels[i])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] == 0) {
        std::size_t farthest = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = sq_dist(points[i], out.centers[static_cast<std::size_t>(labels[i])]);
          if (d > far_d) {
            far_d = d;
            farthest = i;
          }
        }
        out.centers[static_cast<std::size_t>(c)] = points[farthest];
        labels[farthest] = c;
      } else {
        out.centers[static_cast<std::size_t>(c)] = {
            sums[static_cast<std::size_t>(c)].x / counts[static_cast<std::size_t>(c)],
            sums[static_cast<std::size_t>(c)].y / counts[static_cast<std::size_t>(c)]};
      }
    }

    out.iterations = iter + 1;

    std::vector<int> nearest(n);
    assign(nearest);
    double potential = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      potential += sq_dist(points[i], out.centers[static_cast<std::size_t>(nearest[i])]);
    out.inertia_history.push_back(potential);

    if (labels == out.labels) break;
    out.labels = labels;
  }
  assign(out.labels);

  out.inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    out.inertia += sq_dist(points[i], out.centers[static_cast<std::size_t>(out.labels[i])]);
  return out;
}

namespace {

// Clip a convex polygon against the half-plane of points at least as close to
// `keep` as to `other` (the perpendicular bisector), Sutherland-Hodgman style.
std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, const Point2& keep,
                                   const Point2& other) {
  const double nx = other.x - keep.x;
  const double ny = other.y - keep.y;
  const double mx = 0.5 * (keep.x + other.x);
  const double my = 0.5 * (keep.y + other.y);
  auto side = [&](const Point2& p) { return nx * (p.x - mx) + ny * (p.y - my); };  // <= 0 inside

  std::vector<Point2> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    const double sa = side(a);
    const double sb = side(b);
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      const double t = sa / (sa - sb);
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

bool on_box_edge(const Point2& p, const Rect& box, double tol) {
  return std::abs(p.x - box.x_min) <= tol || std::abs(p.x - box.x_max) <= tol ||
         std::abs(p.y - box.y_min) <= tol || std::abs(p.y - box.y_max) <= tol;
}

bool is_box_corner(const Point2& p, const Rect& box, double tol) {
  const bool on_x = std::abs(p.x - box.x_min) <= tol || std::abs(p.x - box.x_max) <= tol;
  const bool on_y = std::abs(p.y - box.y_min) <= tol || std::abs(p.y - box.y_max) <= tol;
  return on_x && on_y;
}

}  // namespace

VoronoiDiagram voronoi(std::span<const Point2> seeds, const Rect& box) {
  if (seeds.size() < 2) throw std::invalid_argument("voronoi: need at least 2 seeds");
  const double tol = 1e-9 * std::max(1.0, box.diagonal());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!box.contains(seeds[i], tol)) throw std::invalid_argument("voronoi: seed outside box");
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (distance(seeds[i], seeds[j]) <= tol)
        throw std::invalid_argument("voronoi: duplicate seeds");
  }

  VoronoiDiagram out;
  out.seeds.assign(seeds.begin(), seeds.end());

  const std::vector<Point2> box_poly = {{box.x_min, box.y_min},
                                        {box.x_max, box.y_min},
                                        {box.x_max, box.y_max},
                                        {box.x_min, box.y_max}};
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    std::vector<Point2> cell = box_poly;
    for (std::size_t j = 0; j < seeds.size() && !cell.empty(); ++j) {
      if (j == i) continue;
      cell = clip_halfplane(cell, seeds[i], seeds[j]);
    }
    out.cells.push_back(std::move(cell));
  }

  // Harvest vertices from the clipped cells. A corner of a cell is a diagram
  // vertex when it is equidistant to >= 3 seeds (interior vertex) or it lies
  // on the box edge equidistant to exactly 2 (a Voronoi edge leaving the box).
  std::vector<Point2> candidates;
  for (const auto& cell : out.cells)
    for (const Point2& v : cell) candidates.push_back(v);

  std::vector<Point2> verts;
  for (const Point2& v : candidates) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point2& s : seeds) best = std::min(best, distance(v, s));
    int nearest = 0;
    for (const Point2& s : seeds)
      if (distance(v, s) <= best + tol) ++nearest;
    const bool keep = nearest >= 3 || (nearest == 2 && on_box_edge(v, box, tol) &&
                                       !is_box_corner(v, box, tol));
    if (!keep) continue;
    bool dup = false;
    for (const Point2& w : verts)
      if (distance(v, w) <= tol) {
        dup = true;
        break;
      }
    if (!dup) verts.push_back(v);
  }
  std::sort(verts.begin(), verts.end(), [](const Point2& a, const Point2& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  out.vertices = std::move(verts);
  return out;
}

double sum_of_distances(const Point2& candidate, std::span<const Point2> points) {
  double total = 0.0;
  for (const Point2& p : points) total += distance(candidate, p);
  return total;
}

Point2 geometric_median(std::span<const Point2> points, double tol, int max_iters) {
  if (points.empty()) throw std::invalid_argument("geometric_median: empty input");
  if (!(tol > 0.0)) throw std::invalid_argument("geometric_median: tol must be > 0");
  if (points.size() == 1) return points[0];

  Point2 x{0.0, 0.0};
  for (const Point2& p : points) {
    x.x += p.x;
    x.y += p.y;
  }
  x.x /= static_cast<double>(points.size());
  x.y /= static_cast<double>(points.size());

  const double eps = tol * 1e-3;
  for (int iter = 0; iter < max_iters; ++iter) {
    // Vardi-Zhang step: the plain Weiszfeld update over points away from x,
    // blended with a pull-off term when x sits exactly on an input point.
    double wx = 0.0, wy = 0.0, wsum = 0.0;
    double rx = 0.0, ry = 0.0;
    int coincident = 0;
    for (const Point2& p : points) {
      const double d = distance(x, p);
      if (d <= eps) {
        ++coincident;
        continue;
      }
      wx += p.x / d;
      wy += p.y / d;
      wsum += 1.0 / d;
      rx += (p.x - x.x) / d;
      ry += (p.y - x.y) / d;
    }
    if (wsum == 0.0) return x;  // all points coincide with x

    const Point2 t{wx / wsum, wy / wsum};
    Point2 next;
    if (coincident == 0) {
      next = t;
    } else {
      const double r = std::hypot(rx, ry);
      if (r <= static_cast<double>(coincident)) return x;  // x is the optimum
      const double beta = static_cast<double>(coincident) / r;
      next = {(1.0 - beta) * t.x + beta * x.x, (1.0 - beta) * t.y + beta * x.y};
    }
    const double step = distance(next, x);
    x = next;
    if (step <= tol) break;
  }
  return x;
}

}  // namespace uswarm
