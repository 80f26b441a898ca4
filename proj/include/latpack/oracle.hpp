#ifndef LATPACK_ORACLE_HPP
#define LATPACK_ORACLE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "latpack/core.hpp"

namespace latpack {

inline constexpr std::int64_t kMaxCoefficientBound = 1'000'000;

/// Coefficient box guaranteed to contain every lattice vector of norm at most
/// `radius`: |a| <= coeff_bound[0], |b| <= coeff_bound[1]. The bounds come
/// from the rows of the inverse basis matrix (dual vector norms).
struct EnumerationBound {
  double radius = 0.0;
  std::array<std::int64_t, 2> coeff_bound{0, 0};

  std::int64_t max() const { return std::max(coeff_bound[0], coeff_bound[1]); }
};

inline EnumerationBound enumeration_bound(const Lattice& lattice, double radius) {
  const Basis& b = lattice.basis();
  // Rows of X^{-1} are (x2.y, -x2.x)/det and (-x1.y, x1.x)/det.
  const double row0 = norm(b.x2) / lattice.det();
  const double row1 = norm(b.x1) / lattice.det();
  const double c0 = std::ceil(radius * row0);
  const double c1 = std::ceil(radius * row1);
  if (!(c0 <= static_cast<double>(kMaxCoefficientBound)) || !(c1 <= static_cast<double>(kMaxCoefficientBound))) {
    throw LatticeError(ErrorKind::BoundOverflow, "enumeration coefficient bound exceeds 1e6");
  }
  return {radius, {static_cast<std::int64_t>(c0), static_cast<std::int64_t>(c1)}};
}

namespace detail {

inline double enumeration_slack(double radius) { return radius + 1e-12 * std::max(1.0, radius); }

/// Every lattice point y = a*x1 + b*x2 with |y - center| <= radius (plus the
/// 1e-12 slack), together with its coefficients. For each a the admissible b
/// form an interval: the roots of a quadratic in b.
inline std::vector<TrackedVector> enumerate_tracked(const Lattice& lattice, const PlaneVector& center, double radius) {
  const EnumerationBound bound = enumeration_bound(lattice, radius);
  const Basis& basis = lattice.basis();
  const double reach = enumeration_slack(radius);
  const double reach2 = reach * reach;
  const double g22 = norm2(basis.x2);

  // Coordinates of the center in the lattice basis.
  const double ca = cross(center, basis.x2) / basis.determinant();
  const double a_lo = std::floor(ca) - static_cast<double>(bound.coeff_bound[0]) - 1.0;
  const double a_hi = std::ceil(ca) + static_cast<double>(bound.coeff_bound[0]) + 1.0;

  std::vector<TrackedVector> out;
  for (auto a = static_cast<std::int64_t>(a_lo); a <= static_cast<std::int64_t>(a_hi); ++a) {
    const PlaneVector w = basis.x1 * static_cast<double>(a) - center;
    const double half_b = dot(w, basis.x2);
    const double disc = half_b * half_b - g22 * (norm2(w) - reach2);
    if (disc < 0.0) continue;
    const double root = std::sqrt(disc);
    const auto b_lo = static_cast<std::int64_t>(std::floor((-half_b - root) / g22)) - 1;
    const auto b_hi = static_cast<std::int64_t>(std::ceil((-half_b + root) / g22)) + 1;
    for (std::int64_t b = b_lo; b <= b_hi; ++b) {
      const PlaneVector y = lattice.point(a, b);
      if (norm(y - center) <= reach) out.push_back({y, a, b});
    }
  }
  return out;
}

inline bool by_norm_then_coordinates(const TrackedVector& p, const TrackedVector& q) {
  const double np = norm(p.v), nq = norm(q.v);
  if (np != nq) return np < nq;
  return p.v < q.v;
}

inline std::vector<TrackedVector> enumerate_nonzero_tracked(const Lattice& lattice, double radius) {
  auto all = enumerate_tracked(lattice, {0.0, 0.0}, radius);
  std::erase_if(all, [](const TrackedVector& t) { return t.a == 0 && t.b == 0; });
  std::sort(all.begin(), all.end(), by_norm_then_coordinates);
  return all;
}

}  // namespace detail

/// Nonzero lattice vectors of norm <= radius, sorted by (norm, x, y).
inline std::vector<PlaneVector> enumerate_vectors(const Lattice& lattice, double radius) {
  std::vector<PlaneVector> out;
  for (const auto& t : detail::enumerate_nonzero_tracked(lattice, radius)) out.push_back(t.v);
  return out;
}

/// All lattice points (origin included) within `radius` of `center`.
inline std::vector<PlaneVector> lattice_points_near(const Lattice& lattice, const PlaneVector& center, double radius) {
  std::vector<PlaneVector> out;
  for (const auto& t : detail::enumerate_tracked(lattice, center, radius)) out.push_back(t.v);
  return out;
}

/// Successive minima by exhaustive enumeration inside the disk whose radius is
/// the longer basis column. Independent of the reduction loop; shares only the
/// final ordering/sign convention.
inline MinimaPair brute_minima(const Lattice& lattice) {
  const Basis& b = lattice.basis();
  const auto candidates = detail::enumerate_nonzero_tracked(lattice, std::max(norm(b.x1), norm(b.x2)));
  const detail::TrackedVector& first = candidates.front();
  for (const auto& t : candidates) {
    if (first.a * t.b - first.b * t.a != 0) return detail::finalize_pair(first, t);
  }
  // Unreachable: x1 and x2 themselves lie in the disk.
  throw LatticeError(ErrorKind::DegenerateBasis, "brute_minima: no independent pair found");
}

namespace detail {

/// Uniform double in [lo, hi) from the top 53 bits of one generator draw.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace detail

inline constexpr int kRandomLatticeAttempts = 10'000;

/// Seeded random lattice: basis entries uniform in [-10, 10), resampled until
/// |det| >= 0.1 |x1| |x2|. Generator is std::mt19937_64 seeded with `seed`;
/// entries are drawn in the order x1.x, x1.y, x2.x, x2.y.
inline Lattice random_lattice(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kRandomLatticeAttempts; ++attempt) {
    Basis b;
    b.x1.x = detail::uniform(rng, -10.0, 10.0);
    b.x1.y = detail::uniform(rng, -10.0, 10.0);
    b.x2.x = detail::uniform(rng, -10.0, 10.0);
    b.x2.y = detail::uniform(rng, -10.0, 10.0);
    if (std::abs(b.determinant()) >= 0.1 * norm(b.x1) * norm(b.x2) && is_nondegenerate(b)) return Lattice(b);
  }
  const double scale = 1.0 + static_cast<double>(seed % 1000) / 1000.0;
  return Lattice({{scale, 0.0}, {0.0, scale}});
}

/// Closed-form density of the shape (s, theta) on the reduced domain.
inline double shape_density(double s, double theta) { return std::numbers::pi / (4.0 * s * std::sin(theta)); }

inline Lattice lattice_from_shape(double s, double theta) {
  return Lattice({{1.0, 0.0}, {s * std::cos(theta), s * std::sin(theta)}});
}

struct GridSearchResult {
  ShapePoint best_shape;
  double best_delta = 0.0;
  double grid_step = 0.0;
  std::size_t argmax_cells = 0;
  std::size_t s_count = 0;
  std::size_t theta_count = 0;
};

inline constexpr double kShapeMaxRatio = 3.0;

inline std::size_t grid_count(double span, double step) {
  return static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
}

/// Exhaustive sweep of s in [1, 3], theta in [pi/3, pi/2] on a uniform grid.
/// Each grid point is turned into the lattice (1,0), s(cos theta, sin theta)
/// and its density is computed by packing_density. Rows of the s axis may be
/// split across `threads`; the result does not depend on the split.
inline GridSearchResult grid_search_density(double step, unsigned threads = 1) {
  if (!(step >= 1e-4 && step <= 0.1)) {
    throw LatticeError(ErrorKind::InvalidStep, "grid step must lie in [1e-4, 0.1]");
  }
  const double theta0 = std::numbers::pi / 3.0;
  const std::size_t ns = grid_count(kShapeMaxRatio - 1.0, step);
  const std::size_t nt = grid_count(std::numbers::pi / 6.0, step);
  std::vector<double> deltas(ns * nt);

  auto sweep_rows = [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      const double s = 1.0 + static_cast<double>(i) * step;
      for (std::size_t j = 0; j < nt; ++j) {
        const double theta = theta0 + static_cast<double>(j) * step;
        deltas[i * nt + j] = packing_density(lattice_from_shape(s, theta)).delta;
      }
    }
  };

  threads = std::clamp<unsigned>(threads, 1, 64);
  if (threads == 1) {
    sweep_rows(0, ns);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (ns + threads - 1) / threads;
    for (std::size_t begin = 0; begin < ns; begin += chunk) {
      pool.emplace_back(sweep_rows, begin, std::min(ns, begin + chunk));
    }
  }

  // Row-major scan keeps the lexicographically smallest (s, theta) on ties.
  std::size_t best = 0;
  for (std::size_t k = 1; k < deltas.size(); ++k) {
    if (deltas[k] > deltas[best]) best = k;
  }
  GridSearchResult result;
  result.best_delta = deltas[best];
  result.best_shape = {1.0 + static_cast<double>(best / nt) * step, theta0 + static_cast<double>(best % nt) * step};
  result.grid_step = step;
  result.s_count = ns;
  result.theta_count = nt;
  result.argmax_cells = static_cast<std::size_t>(
      std::count_if(deltas.begin(), deltas.end(), [&](double d) { return d >= result.best_delta - 1e-9; }));
  return result;
}

}  // namespace latpack

#endif  // LATPACK_ORACLE_HPP
