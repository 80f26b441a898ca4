#ifndef LATPACK_CORE_HPP
#define LATPACK_CORE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include "latpack/vector.hpp"

namespace latpack {

inline constexpr double kDefaultTolerance = 1e-9;
inline constexpr double kDegeneracyTolerance = 1e-12;
inline constexpr int kReductionIterationCap = 256;

/// Row-major 2x2 real matrix. Used for Gram matrices and orthogonal maps.
struct Matrix2 {
  double a = 1.0, b = 0.0;
  double c = 0.0, d = 1.0;

  constexpr PlaneVector operator*(const PlaneVector& v) const {
    return {a * v.x + b * v.y, c * v.x + d * v.y};
  }
  constexpr double determinant() const { return a * d - b * c; }
  constexpr bool operator==(const Matrix2&) const = default;
};

inline Matrix2 rotation(double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c, -s, s, c};
}

/// Reflection across the line through the origin at the given angle.
inline Matrix2 reflection(double angle) {
  const double c = std::cos(2.0 * angle), s = std::sin(2.0 * angle);
  return {c, s, s, -c};
}

/// Integer change-of-basis matrix. Columns hold the coordinates of the new
/// vectors with respect to the old basis: (v1 v2) = (x1 x2) * U.
struct UnimodularMatrix {
  std::int64_t a = 1, b = 0;
  std::int64_t c = 0, d = 1;

  constexpr std::int64_t determinant() const { return a * d - b * c; }
  constexpr bool operator==(const UnimodularMatrix&) const = default;
};

/// Ordered pair of basis columns (x1 x2).
struct Basis {
  PlaneVector x1;
  PlaneVector x2;

  constexpr double determinant() const { return cross(x1, x2); }
  constexpr bool operator==(const Basis&) const = default;
};

inline bool is_nondegenerate(const Basis& b) {
  if (!b.x1.finite() || !b.x2.finite()) return false;
  const double scale = std::max(norm2(b.x1), norm2(b.x2));
  return std::abs(b.determinant()) > kDegeneracyTolerance * scale;
}

/// A rank-two lattice X Z^2. Determinant and Gram matrix are computed once at
/// construction; the object is immutable afterwards.
class Lattice {
 public:
  explicit Lattice(const Basis& basis) : basis_(basis) {
    if (!is_nondegenerate(basis)) {
      throw LatticeError(ErrorKind::DegenerateBasis, "basis vectors are (nearly) linearly dependent");
    }
    det_ = std::abs(basis.determinant());
    const double off = dot(basis.x1, basis.x2);
    gram_ = {norm2(basis.x1), off, off, norm2(basis.x2)};
  }

  const Basis& basis() const { return basis_; }
  double det() const { return det_; }
  const Matrix2& gram() const { return gram_; }

  /// Lattice point a*x1 + b*x2.
  PlaneVector point(std::int64_t a, std::int64_t b) const {
    return basis_.x1 * static_cast<double>(a) + basis_.x2 * static_cast<double>(b);
  }

 private:
  Basis basis_;
  double det_ = 0.0;
  Matrix2 gram_;
};

inline Lattice make_lattice(const Basis& b) { return Lattice(b); }

/// The image alpha * U * L of a lattice under a similarity map.
inline Lattice similarity_image(const Lattice& lattice, double alpha, const Matrix2& orthogonal) {
  const Basis& b = lattice.basis();
  return Lattice({orthogonal * b.x1 * alpha, orthogonal * b.x2 * alpha});
}

/// Two vectors realizing the successive minima, normalized so v1.v2 >= 0.
/// They form a minimal basis of the lattice they came from.
struct MinimaPair {
  PlaneVector v1;
  PlaneVector v2;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double theta = 0.0;
  UnimodularMatrix transform;

  Basis basis() const { return {v1, v2}; }
};

/// Sign normalization for a minima pair: v1 gets its first nonzero coordinate
/// positive, v2 is flipped if needed so that v1.v2 >= 0. When v1.v2 == 0
/// exactly both vectors are sign-canonicalized independently.
inline std::pair<PlaneVector, PlaneVector> normalize_pair(PlaneVector v1, PlaneVector v2) {
  if (!is_nondegenerate({v1, v2})) {
    throw LatticeError(ErrorKind::CollinearVectors, "normalize_pair: vectors are collinear");
  }
  const PlaneVector first = canonical_sign(v1);
  const double d = dot(first, v2);
  PlaneVector second = v2;
  if (d < 0.0) {
    second = -v2;
  } else if (d == 0.0) {
    second = canonical_sign(v2);
  }
  return {first, {second.x + 0.0, second.y + 0.0}};
}

namespace detail {

struct TrackedVector {
  PlaneVector v;
  std::int64_t a = 0;  // coefficient on x1
  std::int64_t b = 0;  // coefficient on x2
};

inline TrackedVector negated(const TrackedVector& t) { return {-t.v, -t.a, -t.b}; }

inline TrackedVector with_sign_of(const TrackedVector& t, const PlaneVector& target) {
  return (t.v == target) ? t : negated(t);
}

/// Relative slack under which two squared norms, or a reduction coefficient
/// and 1/2, count as tied.
inline constexpr double kTieTolerance = 1e-12;

inline bool norms_tie(double p, double q) { return std::abs(p - q) <= kTieTolerance * std::max(p, q); }

/// Shared finalization for every route that produces a minima pair: shorter
/// vector first; on a norm tie the lexicographically larger sign-canonical
/// vector comes first. Then sign-normalize.
inline MinimaPair finalize_pair(TrackedVector p, TrackedVector q) {
  const double np = norm2(p.v), nq = norm2(q.v);
  if (norms_tie(np, nq) ? canonical_sign(p.v) < canonical_sign(q.v) : nq < np) std::swap(p, q);
  const auto [v1, v2] = normalize_pair(p.v, q.v);
  // normalize_pair only flips signs; recover which ones it flipped.
  p = with_sign_of(p, v1);
  q = with_sign_of(q, v2);
  p.v = v1;
  q.v = v2;

  MinimaPair m;
  m.v1 = p.v;
  m.v2 = q.v;
  m.lambda1 = norm(p.v);
  m.lambda2 = norm(q.v);
  m.theta = angle_between(p.v, q.v);
  m.transform = {p.a, q.a, p.b, q.b};
  return m;
}

/// Reduction coefficient: nearest integer, but |r| <= 1/2 (up to the tie
/// slack) maps to zero. A tie must not move; otherwise the hexagonal basis
/// cycles b -> b - a -> b.
inline double reduction_coefficient(double r) {
  if (std::abs(r) <= 0.5 + kTieTolerance) return 0.0;
  return std::round(r);
}

}  // namespace detail

/// Lagrange-Gauss reduction. Returns a minimal basis of the lattice spanned
/// by b together with the unimodular matrix taking b to it.
inline MinimaPair lagrange_reduce(const Basis& b) {
  if (!is_nondegenerate(b)) {
    throw LatticeError(ErrorKind::DegenerateBasis, "basis vectors are (nearly) linearly dependent");
  }
  detail::TrackedVector shorter{b.x1, 1, 0};
  detail::TrackedVector longer{b.x2, 0, 1};

  for (int iter = 0;; ++iter) {
    if (iter >= kReductionIterationCap) {
      throw LatticeError(ErrorKind::IterationLimit, "lagrange_reduce: iteration cap reached");
    }
    if (norm2(longer.v) < norm2(shorter.v)) std::swap(shorter, longer);
    const double r = dot(shorter.v, longer.v) / norm2(shorter.v);
    const double mu = detail::reduction_coefficient(r);
    if (!std::isfinite(mu)) {
      throw LatticeError(ErrorKind::IterationLimit, "lagrange_reduce: non-finite coefficient");
    }
    if (mu == 0.0) break;
    const auto k = static_cast<std::int64_t>(mu);
    longer.v = longer.v - shorter.v * mu;
    longer.a -= k * shorter.a;
    longer.b -= k * shorter.b;
  }
  return detail::finalize_pair(shorter, longer);
}

inline MinimaPair successive_minima(const Lattice& lattice) { return lagrange_reduce(lattice.basis()); }

struct DensityReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double det = 0.0;
  double theta = 0.0;
  double delta = 0.0;
  bool well_rounded = false;
  double gap = 0.0;

  bool operator==(const DensityReport&) const = default;
};

inline void check_tolerance(double tol) {
  if (!(tol > 0.0 && tol <= 1e-3)) {
    throw LatticeError(ErrorKind::InvalidTolerance, "well-rounded tolerance must lie in (0, 1e-3]");
  }
}

inline bool minima_are_equal(const MinimaPair& m, double tol) {
  return m.lambda2 - m.lambda1 <= tol * m.lambda2;
}

/// Density pi * lambda1^2 / (4 det) of the packing by circles of radius lambda1/2.
inline DensityReport packing_density(const Lattice& lattice, double tol = kDefaultTolerance) {
  check_tolerance(tol);
  const MinimaPair m = successive_minima(lattice);
  DensityReport r;
  r.lambda1 = m.lambda1;
  r.lambda2 = m.lambda2;
  r.det = lattice.det();
  r.theta = m.theta;
  r.delta = std::numbers::pi * m.lambda1 * m.lambda1 / (4.0 * lattice.det());
  r.well_rounded = minima_are_equal(m, tol);
  r.gap = std::max(0.0, kHexagonalDensity - r.delta);
  return r;
}

inline double packing_radius(const Lattice& lattice) { return successive_minima(lattice).lambda1 / 2.0; }

inline bool is_well_rounded(const Lattice& lattice, double tol = kDefaultTolerance) {
  check_tolerance(tol);
  return minima_are_equal(successive_minima(lattice), tol);
}

/// The well-rounded lattice (x1, (lambda1/lambda2) x2) Z^2 built on the minimal
/// basis. Same angle, both minima equal to lambda1, density never lower.
inline Lattice wr_round(const Lattice& lattice) {
  const MinimaPair m = successive_minima(lattice);
  return Lattice({m.v1, m.v2 * (m.lambda1 / m.lambda2)});
}

/// Angle of a well-rounded lattice; sin(theta) = pi / (4 * density).
inline double theta_invariant(const Lattice& lattice, double tol = kDefaultTolerance) {
  check_tolerance(tol);
  const MinimaPair m = successive_minima(lattice);
  if (!minima_are_equal(m, tol)) {
    throw LatticeError(ErrorKind::NotWellRounded, "theta_invariant: lattice is not well-rounded");
  }
  return m.theta;
}

/// Similarity-class coordinates: s = lambda2/lambda1 and the minimal-basis angle.
struct ShapePoint {
  double s = 1.0;
  double theta = std::numbers::pi / 2.0;

  bool operator==(const ShapePoint&) const = default;
};

inline ShapePoint shape_parameters(const Lattice& lattice) {
  const MinimaPair m = successive_minima(lattice);
  return {m.lambda2 / m.lambda1, m.theta};
}

inline bool shapes_match(const ShapePoint& p, const ShapePoint& q, double tol) {
  return std::abs(p.s - q.s) <= tol * std::max(p.s, q.s) && std::abs(p.theta - q.theta) <= tol;
}

/// Whether B = alpha * U * A for some alpha != 0 and orthogonal U (reflections
/// included). For well-rounded lattices this reduces to equal angles.
inline bool is_similar(const Lattice& a, const Lattice& b, double tol = kDefaultTolerance) {
  return shapes_match(shape_parameters(a), shape_parameters(b), tol);
}

/// The hexagonal lattice with basis (1, 0), (1/2, sqrt(3)/2).
inline Lattice hexagonal() { return Lattice({{1.0, 0.0}, {0.5, std::numbers::sqrt3 / 2.0}}); }

inline Lattice integer_lattice() { return Lattice({{1.0, 0.0}, {0.0, 1.0}}); }

}  // namespace latpack

#endif  // LATPACK_CORE_HPP
