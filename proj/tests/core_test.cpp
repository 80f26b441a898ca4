#include "latpack/core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "latpack/oracle.hpp"
#include "test_support.hpp"

namespace latpack {
namespace {

using std::numbers::pi;
using std::numbers::sqrt3;

constexpr double kTol = 1e-12;

Lattice from(PlaneVector x1, PlaneVector x2) { return make_lattice({x1, x2}); }

void ExpectRelative(double actual, double expected, double tol) {
  EXPECT_LE(std::abs(actual - expected), tol * std::abs(expected)) << actual << " vs " << expected;
}

// --- make_lattice -----------------------------------------------------------

TEST(MakeLattice, IdentityBasis) {
  const Lattice l = from({1, 0}, {0, 1});
  EXPECT_DOUBLE_EQ(l.det(), 1.0);
  EXPECT_EQ(l.gram(), (Matrix2{1, 0, 0, 1}));
}

TEST(MakeLattice, HexagonalDeterminant) {
  EXPECT_NEAR(from({1, 0}, {0.5, sqrt3 / 2}).det(), sqrt3 / 2, kTol);
}

TEST(MakeLattice, CollinearColumnsAreDegenerate) {
  try {
    from({1, 0}, {2, 0});
    FAIL() << "expected DegenerateBasis";
  } catch (const LatticeError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateBasis);
  }
}

TEST(MakeLattice, RejectsNearlyCollinearAndNonFinite) {
  EXPECT_THROW(from({1, 0}, {1, 1e-13}), LatticeError);
  EXPECT_THROW(from({0, 0}, {0, 0}), LatticeError);
  EXPECT_THROW(from({NAN, 0}, {0, 1}), LatticeError);
  EXPECT_THROW(from({INFINITY, 0}, {0, 1}), LatticeError);
  EXPECT_NO_THROW(from({1, 0}, {1, 1e-11}));
}

TEST(MakeLattice, GramMatrixIsSymmetric) {
  const Lattice l = from({2, 1}, {-1, 3});
  EXPECT_EQ(l.gram(), (Matrix2{5, 1, 1, 10}));
}

// --- normalize_pair / angle_between ----------------------------------------

TEST(NormalizePair, FlipsSecondVectorToPositiveInnerProduct) {
  const auto [a, b] = normalize_pair({1, 0}, {-0.5, -sqrt3 / 2});
  EXPECT_EQ(a, (PlaneVector{1, 0}));
  EXPECT_EQ(b, (PlaneVector{0.5, sqrt3 / 2}));
}

TEST(NormalizePair, OrthogonalKeepsCanonicalInputSigns) {
  const auto [a, b] = normalize_pair({1, 0}, {0, 1});
  EXPECT_EQ(a, (PlaneVector{1, 0}));
  EXPECT_EQ(b, (PlaneVector{0, 1}));
}

TEST(NormalizePair, VerticalFirstVector) {
  const auto [a, b] = normalize_pair({0, 2}, {1, -1});
  EXPECT_EQ(a, (PlaneVector{0, 2}));
  EXPECT_EQ(b, (PlaneVector{-1, 1}));
  EXPECT_EQ(dot(a, b), 2.0);
}

TEST(NormalizePair, OrthogonalTieBreakCanonicalizesBoth) {
  const auto [a, b] = normalize_pair({-1, 0}, {0, -3});
  EXPECT_EQ(a, (PlaneVector{1, 0}));
  EXPECT_EQ(b, (PlaneVector{0, 3}));
}

TEST(NormalizePair, CollinearThrows) {
  try {
    normalize_pair({1, 1}, {-2, -2});
    FAIL();
  } catch (const LatticeError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CollinearVectors);
  }
}

TEST(AngleBetween, Examples) {
  EXPECT_NEAR(angle_between({1, 0}, {0, 3}), pi / 2, kTol);
  EXPECT_NEAR(angle_between({1, 0}, {0.5, sqrt3 / 2}), pi / 3, kTol);
  EXPECT_NEAR(angle_between({1, 1}, {-1, 1}), pi / 2, kTol);
}

TEST(AngleBetween, StableNearZeroAndPi) {
  EXPECT_NEAR(angle_between({1, 0}, {1, 1e-10}), 1e-10, 1e-20);
  EXPECT_NEAR(angle_between({1, 0}, {-1, 1e-10}), pi - 1e-10, 1e-15);
}

TEST(AngleBetween, ZeroVectorThrows) {
  try {
    angle_between({0, 0}, {1, 0});
    FAIL();
  } catch (const LatticeError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
  }
}

// --- lagrange_reduce ---------------------------------------------------------
// Expected minima frozen from testing::box_minima (|a|,|b| <= 8 or 4).

TEST(LagrangeReduce, SkewedIdentity) {
  const auto box = testing::box_minima({1, 0}, {4, 1}, 8);
  ASSERT_DOUBLE_EQ(box.lambda1, 1.0);
  ASSERT_DOUBLE_EQ(box.lambda2, 1.0);

  const MinimaPair m = lagrange_reduce({{1, 0}, {4, 1}});
  EXPECT_EQ(m.v1, (PlaneVector{1, 0}));
  EXPECT_EQ(m.v2, (PlaneVector{0, 1}));
  EXPECT_DOUBLE_EQ(m.lambda1, 1.0);
  EXPECT_DOUBLE_EQ(m.lambda2, 1.0);
  EXPECT_NEAR(m.theta, pi / 2, kTol);
  EXPECT_EQ(m.transform, (UnimodularMatrix{1, -4, 0, 1}));
}

TEST(LagrangeReduce, HexagonalBasisIsAlreadyReduced) {
  const MinimaPair m = lagrange_reduce({{1, 0}, {0.5, sqrt3 / 2}});
  EXPECT_NEAR(m.lambda1, 1.0, kTol);
  EXPECT_NEAR(m.lambda2, 1.0, kTol);
  EXPECT_NEAR(m.theta, pi / 3, kTol);
  EXPECT_EQ(m.v1, (PlaneVector{1, 0}));
  EXPECT_EQ(m.v2, (PlaneVector{0.5, sqrt3 / 2}));
}

TEST(LagrangeReduce, DiagonalPair) {
  const auto box = testing::box_minima({2, 0}, {1, 1}, 4);
  ASSERT_DOUBLE_EQ(box.lambda1, std::sqrt(2.0));
  ASSERT_DOUBLE_EQ(box.lambda2, std::sqrt(2.0));

  const MinimaPair m = lagrange_reduce({{2, 0}, {1, 1}});
  EXPECT_DOUBLE_EQ(m.lambda1, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(m.lambda2, std::sqrt(2.0));
  EXPECT_NEAR(m.theta, pi / 2, kTol);
  // (1,1) and (1,-1) up to sign and order.
  EXPECT_EQ(std::abs(m.v1.x), 1.0);
  EXPECT_EQ(std::abs(m.v1.y), 1.0);
  EXPECT_EQ(std::abs(m.v2.x), 1.0);
  EXPECT_EQ(std::abs(m.v2.y), 1.0);
}

TEST(LagrangeReduce, DegenerateInput) {
  EXPECT_THROW(lagrange_reduce({{1, 2}, {2, 4}}), LatticeError);
  // |det| = 1 against max |x|^2 = 1e12: at the 1e-12 degeneracy threshold.
  EXPECT_THROW(lagrange_reduce({{1, 0}, {1e6 + 0.25, 1}}), LatticeError);
}

TEST(LagrangeReduce, TransformReproducesOutput) {
  const Basis b{{3.25, -1.5}, {17.0, -8.125}};
  const MinimaPair m = lagrange_reduce(b);
  const UnimodularMatrix& u = m.transform;
  EXPECT_EQ(std::abs(u.determinant()), 1);
  const PlaneVector v1 = b.x1 * static_cast<double>(u.a) + b.x2 * static_cast<double>(u.c);
  const PlaneVector v2 = b.x1 * static_cast<double>(u.b) + b.x2 * static_cast<double>(u.d);
  EXPECT_NEAR(norm(v1 - m.v1), 0.0, 1e-12);
  EXPECT_NEAR(norm(v2 - m.v2), 0.0, 1e-12);
}

TEST(LagrangeReduce, VeryLongSecondVectorReducesInOneStep) {
  const MinimaPair m = lagrange_reduce({{1, 0}, {1e4 + 0.25, 1}});
  EXPECT_EQ(m.transform, (UnimodularMatrix{1, -10000, 0, 1}));
  EXPECT_NEAR(m.lambda1, 1.0, kTol);
  EXPECT_NEAR(m.lambda2, std::hypot(0.25, 1.0), 1e-9);
}

// --- successive_minima / density / radius / WR -------------------------------

TEST(SuccessiveMinima, Examples) {
  const MinimaPair z = successive_minima(integer_lattice());
  EXPECT_DOUBLE_EQ(z.lambda1, 1.0);
  EXPECT_DOUBLE_EQ(z.lambda2, 1.0);

  const MinimaPair h = successive_minima(hexagonal());
  EXPECT_NEAR(h.lambda1, 1.0, kTol);
  EXPECT_NEAR(h.lambda2, 1.0, kTol);

  const auto box = testing::box_minima({1, 0}, {0, 2}, 4);
  ASSERT_DOUBLE_EQ(box.lambda2, 2.0);
  const MinimaPair r = successive_minima(from({1, 0}, {0, 2}));
  EXPECT_DOUBLE_EQ(r.lambda1, 1.0);
  EXPECT_DOUBLE_EQ(r.lambda2, 2.0);
  EXPECT_NEAR(r.theta, pi / 2, kTol);
}

TEST(PackingDensity, HexagonalIsOptimal) {
  const DensityReport r = packing_density(hexagonal());
  EXPECT_NEAR(r.delta, pi / (2 * sqrt3), 1e-15);
  EXPECT_NEAR(r.delta, 0.906899, 1e-6);
  EXPECT_LE(r.gap, 1e-15);
  EXPECT_GE(r.gap, 0.0);
  EXPECT_TRUE(r.well_rounded);
}

TEST(PackingDensity, IntegerLattice) {
  const DensityReport r = packing_density(integer_lattice());
  EXPECT_NEAR(r.delta, pi / 4, 1e-15);
  EXPECT_NEAR(r.delta, 0.785398, 1e-6);
  EXPECT_TRUE(r.well_rounded);
}

TEST(PackingDensity, Rectangle) {
  const DensityReport r = packing_density(from({1, 0}, {0, 2}));
  EXPECT_NEAR(r.delta, pi / 8, 1e-15);
  EXPECT_FALSE(r.well_rounded);
  EXPECT_NEAR(r.gap, kHexagonalDensity - pi / 8, 1e-15);
  EXPECT_DOUBLE_EQ(r.det, 2.0);
  EXPECT_DOUBLE_EQ(r.lambda2, 2.0);
}

TEST(PackingRadius, Examples) {
  EXPECT_DOUBLE_EQ(packing_radius(integer_lattice()), 0.5);
  EXPECT_NEAR(packing_radius(hexagonal()), 0.5, kTol);
  EXPECT_DOUBLE_EQ(packing_radius(from({3, 0}, {0, 3})), 1.5);
}

TEST(IsWellRounded, Examples) {
  EXPECT_TRUE(is_well_rounded(hexagonal(), 1e-9));
  EXPECT_FALSE(is_well_rounded(from({1, 0}, {0, 2}), 1e-9));
  EXPECT_TRUE(is_well_rounded(integer_lattice(), 1e-9));
}

TEST(IsWellRounded, ToleranceRange) {
  EXPECT_THROW(is_well_rounded(hexagonal(), 0.0), LatticeError);
  EXPECT_THROW(is_well_rounded(hexagonal(), 2e-3), LatticeError);
  EXPECT_NO_THROW(is_well_rounded(hexagonal(), 1e-3));
  // 1 + 5e-4 relative gap: WR at 1e-3, not at 1e-4.
  const Lattice l = from({1, 0}, {0, 1.0005});
  EXPECT_TRUE(is_well_rounded(l, 1e-3));
  EXPECT_FALSE(is_well_rounded(l, 1e-4));
}

TEST(WrRound, RectangleBecomesSquare) {
  const Lattice in = from({1, 0}, {0, 2});
  const Lattice out = wr_round(in);
  const MinimaPair m = successive_minima(out);
  EXPECT_EQ(m.v1, (PlaneVector{1, 0}));
  EXPECT_EQ(m.v2, (PlaneVector{0, 1}));
  const auto box = testing::box_minima(out.basis().x1, out.basis().x2, 4);
  EXPECT_DOUBLE_EQ(box.lambda1, 1.0);
  EXPECT_DOUBLE_EQ(box.lambda2, 1.0);
  EXPECT_NEAR(packing_density(in).delta, pi / 8, 1e-15);
  EXPECT_NEAR(packing_density(out).delta, pi / 4, 1e-15);
}

TEST(WrRound, HexagonalUnchanged) {
  const Lattice out = wr_round(hexagonal());
  EXPECT_EQ(out.basis(), hexagonal().basis());
}

TEST(WrRound, NonReducedInputIsReducedFirst) {
  const Lattice in = from({1, 0}, {1, sqrt3});
  const auto box = testing::box_minima({1, 0}, {1, sqrt3}, 8);
  ASSERT_DOUBLE_EQ(box.lambda1, 1.0);
  ASSERT_NEAR(box.lambda2, sqrt3, 1e-15);

  const MinimaPair m = successive_minima(in);
  EXPECT_NEAR(m.lambda2, sqrt3, 1e-15);
  EXPECT_NEAR(m.theta, pi / 2, kTol);

  const Lattice out = wr_round(in);
  EXPECT_TRUE(is_well_rounded(out));
  EXPECT_NEAR(packing_density(out).delta, pi / (4 * std::sin(m.theta)), 1e-12);
  const auto out_box = testing::box_minima(out.basis().x1, out.basis().x2, 8);
  EXPECT_NEAR(out_box.lambda1, 1.0, 1e-15);
  EXPECT_NEAR(out_box.lambda2, 1.0, 1e-15);
}

TEST(ThetaInvariant, Examples) {
  EXPECT_NEAR(theta_invariant(hexagonal()), pi / 3, kTol);
  EXPECT_NEAR(theta_invariant(integer_lattice()), pi / 2, kTol);
  EXPECT_NEAR(theta_invariant(from({2, 0}, {1, 1})), pi / 2, kTol);
}

TEST(ThetaInvariant, RejectsNonWellRounded) {
  try {
    theta_invariant(from({1, 0}, {0, 2}));
    FAIL();
  } catch (const LatticeError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotWellRounded);
  }
}

TEST(ThetaInvariant, IndependentOfInputBasis) {
  // Every basis of the hexagonal lattice produces the same angle.
  const Basis h = hexagonal().basis();
  for (int k = -5; k <= 5; ++k) {
    const Lattice l = from(h.x1, h.x2 + h.x1 * static_cast<double>(k));
    EXPECT_NEAR(theta_invariant(l), pi / 3, 1e-9);
    const Lattice l2 = from(h.x1 + h.x2 * static_cast<double>(k), h.x2);
    EXPECT_NEAR(theta_invariant(l2), pi / 3, 1e-9);
  }
}

// --- shapes and similarity ---------------------------------------------------

TEST(ShapeParameters, Examples) {
  const ShapePoint h = shape_parameters(hexagonal());
  EXPECT_NEAR(h.s, 1.0, kTol);
  EXPECT_NEAR(h.theta, pi / 3, kTol);

  const auto box = testing::box_minima({1, 0}, {0, 2}, 4);
  const ShapePoint r = shape_parameters(from({1, 0}, {0, 2}));
  EXPECT_DOUBLE_EQ(r.s, box.lambda2 / box.lambda1);
  EXPECT_DOUBLE_EQ(r.s, 2.0);
  EXPECT_NEAR(r.theta, pi / 2, kTol);

  const ShapePoint z = shape_parameters(integer_lattice());
  EXPECT_DOUBLE_EQ(z.s, 1.0);
  EXPECT_NEAR(z.theta, pi / 2, kTol);
}

TEST(IsSimilar, Examples) {
  const Lattice h = hexagonal();
  EXPECT_TRUE(is_similar(h, similarity_image(h, 5.0, rotation(1.0))));
  EXPECT_FALSE(is_similar(h, integer_lattice()));
  EXPECT_TRUE(is_similar(from({1, 0}, {0, 2}), from({3, 0}, {0, 6})));
  EXPECT_TRUE(is_similar(from({1, 0}, {0, 2}), from({0, 3}, {6, 0})));
}

TEST(IsSimilar, ReflectionsCount) {
  const Lattice l = from({1.3, 0.2}, {0.4, 2.1});
  EXPECT_TRUE(is_similar(l, similarity_image(l, 0.7, reflection(0.3)), 1e-9));
  EXPECT_FALSE(is_similar(l, from({1.3, 0.2}, {0.4, 2.2}), 1e-9));
}

TEST(Hexagonal, LiteralDecimalBasis) {
  const Basis b = hexagonal().basis();
  EXPECT_EQ(b.x1, (PlaneVector{1.0, 0.0}));
  EXPECT_EQ(b.x2, (PlaneVector{0.5, sqrt3 / 2}));
  EXPECT_NEAR(hexagonal().det(), sqrt3 / 2, 1e-16);
  EXPECT_NEAR(packing_density(hexagonal()).delta, 0.906899, 1e-6);
}

// --- property tests ----------------------------------------------------------

constexpr int kPropertyCases = 2000;

TEST(CoreProperties, ReductionMatchesBoxEnumeration) {
  for (std::uint64_t seed = 0; seed < kPropertyCases; ++seed) {
    const Lattice l = random_lattice(seed);
    const MinimaPair m = successive_minima(l);
    // With |det| >= 0.1 |x1||x2|, minimal-vector coefficients are at most
    // 11 * (longer column / shorter column).
    const double n1 = norm(l.basis().x1), n2 = norm(l.basis().x2);
    const double ratio = std::max(n1, n2) / std::min(n1, n2);
    if (ratio > 20) continue;
    const auto box = testing::box_minima(l.basis().x1, l.basis().x2, static_cast<int>(std::ceil(11 * ratio)) + 1);
    ExpectRelative(m.lambda1, box.lambda1, 1e-9);
    ExpectRelative(m.lambda2, box.lambda2, 1e-9);
    EXPECT_EQ(std::abs(m.transform.determinant()), 1) << "seed " << seed;
    ExpectRelative(std::abs(cross(m.v1, m.v2)), l.det(), 1e-9);
  }
}

TEST(CoreProperties, MinimaPairInvariants) {
  for (std::uint64_t seed = 0; seed < kPropertyCases; ++seed) {
    const MinimaPair m = successive_minima(random_lattice(seed));
    EXPECT_GE(dot(m.v1, m.v2), 0.0);
    EXPECT_LE(m.lambda1, m.lambda2 * (1 + 1e-12));
    EXPECT_EQ(m.lambda1, norm(m.v1));
    EXPECT_EQ(m.lambda2, norm(m.v2));
    EXPECT_GE(m.theta, pi / 3 - 1e-12) << "seed " << seed;
    EXPECT_LE(m.theta, pi / 2 + 1e-12) << "seed " << seed;
  }
}

TEST(CoreProperties, ShortDifferenceForAcuteAngles) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> len(0.1, 10.0), ang(1e-6, pi / 3 - 1e-6), rot(-pi, pi);
  for (int i = 0; i < 10000; ++i) {
    const double r1 = len(rng), r2 = len(rng), base = rot(rng), a = ang(rng);
    const PlaneVector v1{r1 * std::cos(base), r1 * std::sin(base)};
    const PlaneVector v2{r2 * std::cos(base + a), r2 * std::sin(base + a)};
    EXPECT_LT(norm(v1 - v2), std::max(norm(v1), norm(v2)));
  }
}

TEST(CoreProperties, EqualNormBasesInAdmissibleAngleAreMinimal) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> len(0.1, 10.0), ang(pi / 3, pi / 2), rot(-pi, pi);
  for (int i = 0; i < 5000; ++i) {
    const double r = len(rng), base = rot(rng), a = ang(rng);
    const Lattice l = from({r * std::cos(base), r * std::sin(base)}, {r * std::cos(base + a), r * std::sin(base + a)});
    const MinimaPair m = successive_minima(l);
    ExpectRelative(m.lambda1, r, 1e-12);
    ExpectRelative(m.lambda2, r, 1e-12);
    EXPECT_TRUE(is_well_rounded(l));
  }
}

TEST(CoreProperties, WellRoundedRoundingDominatesDensity) {
  for (std::uint64_t seed = 0; seed < kPropertyCases; ++seed) {
    const Lattice l = random_lattice(seed);
    const DensityReport before = packing_density(l);
    const Lattice wr = wr_round(l);
    const DensityReport after = packing_density(wr);
    EXPECT_GE(after.delta, before.delta - 1e-12);
    EXPECT_TRUE(after.well_rounded);
    ExpectRelative(after.lambda1, before.lambda1, 1e-12);
    EXPECT_NEAR(after.theta, before.theta, 1e-9);
    const bool equal = std::abs(after.delta - before.delta) <= 1e-9;
    EXPECT_EQ(equal, before.well_rounded) << "seed " << seed;
    // Idempotent on WR lattices.
    EXPECT_NEAR(packing_density(wr_round(wr)).delta, after.delta, 1e-12);
  }
}

TEST(CoreProperties, WellRoundedDensityFormula) {
  for (std::uint64_t seed = 0; seed < kPropertyCases; ++seed) {
    const Lattice wr = wr_round(random_lattice(seed));
    const double theta = theta_invariant(wr);
    EXPECT_NEAR(packing_density(wr).delta, pi / (4 * std::sin(theta)), 1e-9);
  }
}

TEST(CoreProperties, GlobalDensityBound) {
  const Lattice hex = hexagonal();
  for (std::uint64_t seed = 0; seed < kPropertyCases; ++seed) {
    const Lattice l = random_lattice(seed);
    const double delta = packing_density(l).delta;
    EXPECT_LE(delta, kHexagonalDensity + 1e-9);
    if (kHexagonalDensity - delta <= 1e-6) {
      EXPECT_TRUE(is_similar(l, hex, 1e-4));
    }
  }
  // Rotated, scaled and reflected hexagonal lattices sit exactly at the bound.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> alpha(0.1, 10.0), ang(-pi, pi);
  for (int i = 0; i < 500; ++i) {
    const Matrix2 u = (i % 2 == 0) ? rotation(ang(rng)) : reflection(ang(rng));
    const Lattice l = similarity_image(hex, alpha(rng), u);
    EXPECT_NEAR(packing_density(l).delta, kHexagonalDensity, 1e-9);
    EXPECT_TRUE(is_similar(l, hex, 1e-4));
  }
}

TEST(CoreProperties, ShapeInvariantUnderSimilarity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> alpha(0.1, 10.0), ang(-pi, pi);
  for (std::uint64_t seed = 0; seed < kPropertyCases; ++seed) {
    const Lattice l = random_lattice(seed);
    const Matrix2 u = (seed % 2 == 0) ? rotation(ang(rng)) : reflection(ang(rng));
    const double a = alpha(rng);
    const Lattice image = similarity_image(l, a, u);
    const ShapePoint p = shape_parameters(l), q = shape_parameters(image);
    EXPECT_NEAR(p.s, q.s, 1e-9 * p.s);
    EXPECT_NEAR(p.theta, q.theta, 1e-9);
    EXPECT_GE(p.s, 1 - 1e-12);
    // Determinant scales by alpha^2 and is unchanged by reduction.
    ExpectRelative(image.det(), a * a * l.det(), 1e-12);
    const MinimaPair m = successive_minima(l);
    ExpectRelative(std::abs(cross(m.v1, m.v2)), l.det(), 1e-9);
  }
}

}  // namespace
}  // namespace latpack
