#ifndef LATPACK_VERIFY_HPP
#define LATPACK_VERIFY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "latpack/core.hpp"
#include "latpack/oracle.hpp"
#include "latpack/voronoi.hpp"

namespace latpack {

/// Real change-of-basis matrix M with (to) = (from) * M, plus how far it is
/// from being an integer unimodular matrix.
struct ChangeOfBasis {
  Matrix2 matrix;
  double integrality_residual = 0.0;
  double rounded_determinant = 0.0;

  bool unimodular(double tol) const {
    return integrality_residual <= tol && std::abs(rounded_determinant) == 1.0;
  }
};

inline ChangeOfBasis change_of_basis(const Basis& from, const Basis& to) {
  const double det = from.determinant();
  // from^{-1} = [[f2.y, -f2.x], [-f1.y, f1.x]] / det
  auto coords = [&](const PlaneVector& v) {
    return PlaneVector{cross(v, from.x2) / det, cross(from.x1, v) / det};
  };
  const PlaneVector c1 = coords(to.x1), c2 = coords(to.x2);
  ChangeOfBasis out;
  out.matrix = {c1.x, c2.x, c1.y, c2.y};
  const std::array<double, 4> entries{c1.x, c2.x, c1.y, c2.y};
  for (double e : entries) out.integrality_residual = std::max(out.integrality_residual, std::abs(e - std::round(e)));
  out.rounded_determinant = std::round(c1.x) * std::round(c2.y) - std::round(c2.x) * std::round(c1.y);
  return out;
}

inline double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

struct PropertyResult {
  std::string name;
  bool passed = true;
  std::size_t samples = 0;
  double worst_residual = 0.0;
  double threshold = 0.0;

  void record(double residual) {
    ++samples;
    worst_residual = std::max(worst_residual, residual);
    if (!(residual <= threshold)) passed = false;
  }
  void fail() { passed = false; }
};

/// Seeds seed, seed+1, ..., seed+count-1.
struct SeedRange {
  std::uint64_t first = 0;
  std::size_t count = 0;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < count; ++k) f(random_lattice(first + k));
  }
};

/// lambda1, lambda2 from reduction and from enumeration agree, and the two
/// bases differ by an integer unimodular matrix.
inline PropertyResult check_oracle_agreement(const SeedRange& seeds, double minima_tol = 1e-9,
                                             double integrality_tol = 1e-6) {
  PropertyResult r{"oracle_agreement", true, 0, 0.0, minima_tol};
  seeds.for_each([&](const Lattice& lattice) {
    const MinimaPair fast = successive_minima(lattice);
    const MinimaPair slow = brute_minima(lattice);
    const double err = std::max(relative_error(fast.lambda1, slow.lambda1), relative_error(fast.lambda2, slow.lambda2));
    r.record(err);
    const ChangeOfBasis m = change_of_basis(fast.basis(), slow.basis());
    if (!m.unimodular(integrality_tol)) r.fail();
  });
  return r;
}

/// Largest excess of the pair angle outside [pi/3, pi/2].
inline PropertyResult check_angle_bound(const SeedRange& seeds, double tol = 1e-12) {
  PropertyResult r{"angle_bound", true, 0, 0.0, tol};
  seeds.for_each([&](const Lattice& lattice) {
    const double theta = successive_minima(lattice).theta;
    r.record(std::max({0.0, std::numbers::pi / 3.0 - theta, theta - std::numbers::pi / 2.0}));
  });
  return r;
}

/// Density never exceeds pi/(2 sqrt 3); near-optimal lattices are hexagonal.
inline PropertyResult check_density_bound(const SeedRange& seeds, double tol = 1e-9, double near = 1e-6,
                                          double similarity_tol = 1e-4) {
  PropertyResult r{"density_bound", true, 0, 0.0, tol};
  const Lattice hex = hexagonal();
  seeds.for_each([&](const Lattice& lattice) {
    const double delta = packing_density(lattice).delta;
    r.record(std::max(0.0, delta - kHexagonalDensity));
    if (kHexagonalDensity - delta <= near && !is_similar(lattice, hex, similarity_tol)) r.fail();
  });
  return r;
}

/// Rounding never lowers density; it strictly raises it when lambda2/lambda1 > 1 + 1e-6.
/// Residual is the largest density drop.
inline PropertyResult check_wr_dominance(const SeedRange& seeds, double tol = 1e-12) {
  PropertyResult r{"wr_dominance", true, 0, 0.0, tol};
  seeds.for_each([&](const Lattice& lattice) {
    const DensityReport before = packing_density(lattice);
    const double after = packing_density(wr_round(lattice)).delta;
    r.record(std::max(0.0, before.delta - after));
    if (before.lambda2 / before.lambda1 > 1.0 + 1e-6 && !(after - before.delta >= tol)) r.fail();
  });
  return r;
}

/// On rounded lattices the density equals pi / (4 sin theta).
inline PropertyResult check_wr_formula(const SeedRange& seeds, double tol = 1e-9) {
  PropertyResult r{"wr_formula", true, 0, 0.0, tol};
  seeds.for_each([&](const Lattice& lattice) {
    const Lattice wr = wr_round(lattice);
    const double theta = theta_invariant(wr);
    r.record(std::abs(packing_density(wr).delta - std::numbers::pi / (4.0 * std::sin(theta))));
  });
  return r;
}

inline PropertyResult check_voronoi_area(const SeedRange& seeds, double tol = 1e-9) {
  PropertyResult r{"voronoi_area", true, 0, 0.0, tol};
  seeds.for_each([&](const Lattice& lattice) { r.record(relative_error(cell_area(voronoi_cell(lattice)), lattice.det())); });
  return r;
}

inline PropertyResult check_voronoi_in_radius(const SeedRange& seeds, double tol = 1e-9) {
  PropertyResult r{"voronoi_in_radius", true, 0, 0.0, tol};
  seeds.for_each([&](const Lattice& lattice) {
    r.record(relative_error(cell_in_radius(voronoi_cell(lattice)), packing_radius(lattice)));
  });
  return r;
}

/// Points sampled in the fundamental parallelogram must lie in at least one
/// translate of the cell, and in the interior of at most one. Residual is the
/// number of violating points.
inline PropertyResult check_tiling(const SeedRange& seeds, std::size_t points_per_lattice) {
  PropertyResult r{"voronoi_tiling", true, 0, 0.0, 0.0};
  std::size_t index = 0;
  double violations = 0.0;
  seeds.for_each([&](const Lattice& lattice) {
    const VoronoiCell cell = voronoi_cell(lattice);
    const double reach = 2.0 * successive_minima(lattice).lambda2;
    std::mt19937_64 rng(seeds.first + index++);
    for (std::size_t k = 0; k < points_per_lattice; ++k) {
      const double a = detail::uniform(rng, 0.0, 1.0), b = detail::uniform(rng, 0.0, 1.0);
      const PlaneVector p = lattice.basis().x1 * a + lattice.basis().x2 * b;
      std::size_t closed = 0, interior = 0;
      for (const auto& y : lattice_points_near(lattice, p, reach)) {
        closed += cell_contains(cell, p - y) ? 1 : 0;
        interior += cell_interior_contains(cell, p - y) ? 1 : 0;
      }
      ++r.samples;
      if (closed == 0 || interior > 1) violations += 1.0;
    }
  });
  r.worst_residual = violations;
  r.passed = violations == 0.0;
  return r;
}

/// The grid optimum sits at the hexagonal corner (1, pi/3) with a unique argmax.
inline PropertyResult check_grid_search(double step, GridSearchResult* out = nullptr) {
  PropertyResult r{"grid_search", true, 0, 0.0, step};
  const GridSearchResult g = grid_search_density(step);
  const double shape_err =
      std::max(std::abs(g.best_shape.s - 1.0), std::abs(g.best_shape.theta - std::numbers::pi / 3.0));
  r.record(shape_err);
  if (!(std::abs(g.best_delta - kHexagonalDensity) <= 2.0 * step)) r.fail();
  if (g.best_delta > kHexagonalDensity + 1e-12) r.fail();
  if (step <= 1e-2 && g.argmax_cells != 1) r.fail();
  if (out != nullptr) *out = g;
  return r;
}

struct VerifySummary {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  double step = 0.0;
  double max_density = 0.0;
  std::vector<PropertyResult> properties;

  bool passed() const {
    return std::all_of(properties.begin(), properties.end(), [](const PropertyResult& p) { return p.passed; });
  }
};

/// Runs every property over `count` random lattices starting at `seed`, then
/// the grid search at `step`. With count == 0 the random suites pass vacuously.
inline VerifySummary run_verify(std::uint64_t seed, std::size_t count, double step) {
  if (!(step >= 1e-4 && step <= 0.1)) {
    throw LatticeError(ErrorKind::InvalidStep, "grid step must lie in [1e-4, 0.1]");
  }
  const SeedRange seeds{seed, count};
  VerifySummary s;
  s.seed = seed;
  s.count = count;
  s.step = step;
  seeds.for_each([&](const Lattice& l) { s.max_density = std::max(s.max_density, packing_density(l).delta); });
  s.properties.push_back(check_oracle_agreement(seeds));
  s.properties.push_back(check_angle_bound(seeds));
  s.properties.push_back(check_density_bound(seeds));
  s.properties.push_back(check_wr_dominance(seeds));
  s.properties.push_back(check_wr_formula(seeds));
  s.properties.push_back(check_voronoi_area(seeds));
  s.properties.push_back(check_voronoi_in_radius(seeds));
  s.properties.push_back(check_tiling(seeds, 10));
  s.properties.push_back(check_grid_search(step));
  return s;
}

}  // namespace latpack

#endif  // LATPACK_VERIFY_HPP
