#ifndef LATPACK_VORONOI_HPP
#define LATPACK_VORONOI_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "latpack/core.hpp"

namespace latpack {

/// Below this |cos(theta)| the hexagon's two short edges are slivers and the
/// cell is emitted as a rectangle.
inline constexpr double kRectangularCosine = 1e-9;

/// Voronoi cell of a planar lattice at the origin: a centrally symmetric
/// convex polygon with 4 or 6 vertices, listed counterclockwise. `relevant`
/// holds the lattice vectors whose bisectors carry the edges, sorted by
/// polar angle.
struct VoronoiCell {
  std::vector<PlaneVector> vertices;
  std::vector<PlaneVector> relevant;
};

namespace detail {

inline double polar_angle(const PlaneVector& v) { return std::atan2(v.y + 0.0, v.x + 0.0); }

inline void sort_by_polar_angle(std::vector<PlaneVector>& vs) {
  std::sort(vs.begin(), vs.end(), [](const PlaneVector& p, const PlaneVector& q) {
    const double ap = polar_angle(p), aq = polar_angle(q);
    if (ap != aq) return ap < aq;
    return norm2(p) < norm2(q);
  });
}

/// Intersection of the bisector lines w.y = |w|^2/2 of two independent vectors.
inline PlaneVector bisector_intersection(const PlaneVector& w1, const PlaneVector& w2) {
  const double r1 = norm2(w1) / 2.0, r2 = norm2(w2) / 2.0;
  const double det = cross(w1, w2);
  return {(r1 * w2.y - r2 * w1.y) / det, (w1.x * r2 - w2.x * r1) / det};
}

}  // namespace detail

/// The lattice vectors whose bisectors bound the cell: +-v1, +-v2 and, unless
/// the pair is orthogonal, +-(v1 - v2). Sorted by polar angle.
inline std::vector<PlaneVector> relevant_vectors(const MinimaPair& m) {
  std::vector<PlaneVector> out{m.v1, -m.v1, m.v2, -m.v2};
  const double cosine = dot(m.v1, m.v2) / (m.lambda1 * m.lambda2);
  if (std::abs(cosine) > kRectangularCosine) {
    const PlaneVector diff = m.v1 - m.v2;
    out.push_back(diff);
    out.push_back(-diff);
  }
  for (auto& v : out) v = {v.x + 0.0, v.y + 0.0};
  detail::sort_by_polar_angle(out);
  return out;
}

inline VoronoiCell voronoi_cell(const Lattice& lattice) {
  VoronoiCell cell;
  cell.relevant = relevant_vectors(successive_minima(lattice));
  const std::size_t n = cell.relevant.size();
  std::vector<PlaneVector> ccw;
  ccw.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PlaneVector p = detail::bisector_intersection(cell.relevant[i], cell.relevant[(i + 1) % n]);
    ccw.push_back({p.x + 0.0, p.y + 0.0});
  }
  // Start at the vertex with the largest polar angle strictly below pi
  // (ties: smaller radius), then continue counterclockwise.
  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double ai = detail::polar_angle(ccw[i]), as = detail::polar_angle(ccw[start]);
    const bool below_i = ai < std::numbers::pi, below_s = as < std::numbers::pi;
    if (below_i != below_s) {
      if (below_i) start = i;
      continue;
    }
    if (ai > as || (ai == as && norm2(ccw[i]) < norm2(ccw[start]))) start = i;
  }
  // ccw is ordered by increasing polar angle, so walking forward is CCW.
  cell.vertices.reserve(n);
  for (std::size_t k = 0; k < n; ++k) cell.vertices.push_back(ccw[(start + k) % n]);
  return cell;
}

/// Shoelace area.
inline double cell_area(const VoronoiCell& cell) {
  const auto& vs = cell.vertices;
  double twice = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) twice += cross(vs[i], vs[(i + 1) % vs.size()]);
  return std::abs(twice) / 2.0;
}

/// Distance from the origin to the nearest edge line of the polygon.
inline double cell_in_radius(const VoronoiCell& cell) {
  const auto& vs = cell.vertices;
  double best = INFINITY;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const PlaneVector& p = vs[i];
    const PlaneVector& q = vs[(i + 1) % vs.size()];
    const double len = norm(q - p);
    if (len == 0.0) continue;
    best = std::min(best, std::abs(cross(p, q)) / len);
  }
  return best;
}

inline double cell_circumradius(const VoronoiCell& cell) {
  double r = 0.0;
  for (const auto& v : cell.vertices) r = std::max(r, norm(v));
  return r;
}

/// Closed membership: every edge half-plane w.p <= |w|^2/2 holds up to a
/// signed-distance slack of tol times the cell's circumradius.
inline bool cell_contains(const VoronoiCell& cell, const PlaneVector& p, double tol = kDefaultTolerance) {
  const double slack = tol * cell_circumradius(cell);
  return std::all_of(cell.relevant.begin(), cell.relevant.end(), [&](const PlaneVector& w) {
    const double len = norm(w);
    return (norm2(w) / 2.0 - dot(p, w)) / len >= -slack;
  });
}

/// Strict interior membership with the same slack taken inward.
inline bool cell_interior_contains(const VoronoiCell& cell, const PlaneVector& p, double tol = kDefaultTolerance) {
  const double slack = tol * cell_circumradius(cell);
  return std::all_of(cell.relevant.begin(), cell.relevant.end(), [&](const PlaneVector& w) {
    const double len = norm(w);
    return (norm2(w) / 2.0 - dot(p, w)) / len > slack;
  });
}

}  // namespace latpack

#endif  // LATPACK_VORONOI_HPP
