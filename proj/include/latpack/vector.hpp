#ifndef LATPACK_VECTOR_HPP
#define LATPACK_VECTOR_HPP

#include <cmath>
#include <compare>
#include <numbers>
#include <stdexcept>
#include <string>

namespace latpack {

/// Failure categories raised by the library. The CLI maps each to an exit code.
enum class ErrorKind {
  DegenerateBasis,
  CollinearVectors,
  ZeroVector,
  IterationLimit,
  NotWellRounded,
  InvalidTolerance,
  BoundOverflow,
  InvalidStep,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::CollinearVectors: return "CollinearVectors";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::IterationLimit: return "IterationLimit";
    case ErrorKind::NotWellRounded: return "NotWellRounded";
    case ErrorKind::InvalidTolerance: return "InvalidTolerance";
    case ErrorKind::BoundOverflow: return "BoundOverflow";
    case ErrorKind::InvalidStep: return "InvalidStep";
  }
  return "Unknown";
}

class LatticeError : public std::runtime_error {
 public:
  LatticeError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Densest lattice packing density in the plane, pi / (2 sqrt 3).
inline constexpr double kHexagonalDensity =
    std::numbers::pi / (2.0 * std::numbers::sqrt3);

struct PlaneVector {
  double x = 0.0;
  double y = 0.0;

  constexpr PlaneVector operator+(const PlaneVector& o) const { return {x + o.x, y + o.y}; }
  constexpr PlaneVector operator-(const PlaneVector& o) const { return {x - o.x, y - o.y}; }
  constexpr PlaneVector operator-() const { return {-x, -y}; }
  constexpr PlaneVector operator*(double s) const { return {x * s, y * s}; }
  friend constexpr PlaneVector operator*(double s, const PlaneVector& v) { return v * s; }

  constexpr bool operator==(const PlaneVector&) const = default;
  constexpr auto operator<=>(const PlaneVector&) const = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr double dot(const PlaneVector& a, const PlaneVector& b) { return a.x * b.x + a.y * b.y; }

/// z-component of the 3D cross product; the signed area of the parallelogram.
constexpr double cross(const PlaneVector& a, const PlaneVector& b) { return a.x * b.y - a.y * b.x; }

constexpr double norm2(const PlaneVector& v) { return dot(v, v); }

inline double norm(const PlaneVector& v) { return std::hypot(v.x, v.y); }

/// Unsigned angle in [0, pi]. Uses atan2 of |cross| and dot so it stays
/// accurate near 0 and pi where acos loses digits.
inline double angle_between(const PlaneVector& a, const PlaneVector& b) {
  if ((a.x == 0.0 && a.y == 0.0) || (b.x == 0.0 && b.y == 0.0)) {
    throw LatticeError(ErrorKind::ZeroVector, "angle_between: zero vector");
  }
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

/// Flip v so that its first nonzero coordinate is positive.
inline PlaneVector canonical_sign(const PlaneVector& v) {
  const PlaneVector r = (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) ? -v : v;
  return {r.x + 0.0, r.y + 0.0};  // drop negative zeros
}

}  // namespace latpack

#endif  // LATPACK_VECTOR_HPP
