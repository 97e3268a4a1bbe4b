#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "geod/geometry.hpp"
#include "test_support.hpp"

namespace geod {
namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

TEST(Ball, ClampsRoundoffNegativeRadius) {
  EXPECT_EQ(Ball(v2(0, 0), -1e-13).radius_sq(), 0.0);
  EXPECT_EQ(Ball(v2(0, 0), -1e-10, 1e3).radius_sq(), 0.0);
  try {
    Ball(v2(0, 0), -1e-6);
    FAIL() << "expected NegativeRadius";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::negative_radius);
  }
}

TEST(Ball, RejectsNonFinite) {
  EXPECT_THROW(Ball(v2(NAN, 0), 1.0), Error);
  EXPECT_THROW(Ball(v2(0, 0), INFINITY), Error);
}

TEST(MinEnclosingBall, IdenticalBallsReturnFirst) {
  const Ball a(v2(0, 0), 1.0);
  const Ball r = min_enclosing_ball(a, Ball(v2(0, 0), 1.0));
  EXPECT_EQ(r.center(), v2(0, 0));
  EXPECT_EQ(r.radius_sq(), 1.0);
}

TEST(MinEnclosingBall, ContainedSmallBallIsReturned) {
  const Ball inner(v2(0.5, 0), 0.25);
  const Ball r = min_enclosing_ball(Ball(v2(0, 0), 4.0), inner);
  EXPECT_EQ(r.center(), inner.center());
  EXPECT_EQ(r.radius_sq(), 0.25);
}

TEST(MinEnclosingBall, LensOfTwoUnitBalls) {
  // Radical plane at x = 1/2, lens circle radius² = 1 - 1/4.
  const Ball a(v2(0, 0), 1.0);
  const Ball b(v2(1, 0), 1.0);
  const Ball r = min_enclosing_ball(a, b);
  EXPECT_NEAR(r.center()[0], 0.5, 1e-15);
  EXPECT_NEAR(r.center()[1], 0.0, 1e-15);
  EXPECT_NEAR(r.radius_sq(), 0.75, 1e-15);

  const auto pts = testing::box_sample_intersection(a.center(), 1.0, b.center(), 1.0, 100'000, 11);
  ASSERT_EQ(pts.size(), 100'000u);
  for (const Vector& p : pts) ASSERT_TRUE(contains(r, p, 1e-12));
}

TEST(MinEnclosingBall, UnequalRadiiMatchesHandFormula) {
  // |Δ|² = 4 >= |RA² - RB²| = 3: plane at x = (4 + 4 - 1)/4 = 1.75 from A.
  const Ball r = min_enclosing_ball(Ball(v2(0, 0), 4.0), Ball(v2(2, 0), 1.0));
  EXPECT_NEAR(r.center()[0], 1.75, 1e-15);
  EXPECT_NEAR(r.radius_sq(), 4.0 - 1.75 * 1.75, 1e-15);
}

TEST(MinEnclosingBall, Errors) {
  EXPECT_THROW(min_enclosing_ball(Ball(v2(0, 0), 1.0), Ball(Vector::Zero(3), 1.0)), Error);
  try {
    min_enclosing_ball(Ball(v2(0, 0), 1.0), Ball(v2(3, 0), 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::disjoint_balls);
  }
  // Barely apart, inside the scale-aware tolerance: tangent point.
  const Ball t = min_enclosing_ball(Ball(v2(0, 0), 1.0), Ball(v2(2.0 + 1e-10, 0), 1.0));
  EXPECT_EQ(t.radius_sq(), 0.0);
  EXPECT_NEAR(t.center()[0], 1.0, 1e-9);
}

TEST(MinEnclosingBall, RandomPairsContainLensAndShrink) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = dim(rng);
    const double ra = 0.2 + 2.0 * u(rng);
    const double rb = 0.2 + 2.0 * u(rng);
    const Vector ca = testing::random_vector(rng, n, -3, 3);
    Vector dir = testing::random_vector(rng, n);
    dir.normalize();
    const Vector cb = ca + (u(rng) * std::max(ra, rb)) * dir;
    const Ball a(ca, ra * ra);
    const Ball b(cb, rb * rb);
    const Ball r = min_enclosing_ball(a, b);
    EXPECT_LE(r.radius_sq(), std::min(a.radius_sq(), b.radius_sq()));
    for (const Vector& p : sample_intersection(a, b, 50, trial)) {
      ASSERT_TRUE(contains(r, p, 1e-9)) << "trial " << trial;
    }
  }
}

TEST(MinEnclosingBall, SymmetricWhenLensCaseApplies) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const Ball a(testing::random_vector(rng, 4), u(rng));
    const Ball b(testing::random_vector(rng, 4), u(rng));
    const double d2 = (a.center() - b.center()).squaredNorm();
    if (!intersects(a, b) || d2 < std::abs(a.radius_sq() - b.radius_sq())) continue;
    const Ball ab = min_enclosing_ball(a, b);
    const Ball ba = min_enclosing_ball(b, a);
    ASSERT_LE((ab.center() - ba.center()).norm(), 1e-12);
    ASSERT_NEAR(ab.radius_sq(), ba.radius_sq(), 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(MinEnclosingBall, RigidMotionEquivariance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 2 + trial % 9;
    const Ball a(testing::random_vector(rng, n), u(rng));
    const Ball b(testing::random_vector(rng, n), u(rng));
    if (!intersects(a, b)) continue;
    const Eigen::MatrixXd q = testing::random_rotation(rng, n);
    const Vector shift = testing::random_vector(rng, n, -5, 5);
    const Ball r = min_enclosing_ball(a, b);
    const Ball moved = min_enclosing_ball(Ball(q * a.center() + shift, a.radius_sq()),
                                          Ball(q * b.center() + shift, b.radius_sq()));
    ASSERT_LE((moved.center() - (q * r.center() + shift)).norm(), 1e-10);
    ASSERT_NEAR(moved.radius_sq(), r.radius_sq(), 1e-10);
  }
}

TEST(LemmaShrinkBall, UnitGradientQuarterEps) {
  // x = (1 + 1 - 1)/2 = 1/2, radius² = 1 - 1/4 - 1/4 = 1/2 = 1 - sqrt(1/4).
  const Ball c = lemma_shrink_ball(v2(1, 0), 1.0, 0.25, 0.0);
  EXPECT_NEAR(c.center()[0], 0.5, 1e-15);
  EXPECT_NEAR(c.center()[1], 0.0, 1e-15);
  EXPECT_NEAR(c.radius_sq(), 0.5, 1e-15);
  EXPECT_LE(c.radius_sq(), 1.0 - std::sqrt(0.25) + 1e-15);
}

TEST(LemmaShrinkBall, SmallGradientKeepsCenterA) {
  const Ball c = lemma_shrink_ball(v2(2, 0), 0.5, 0.25, 0.0);
  EXPECT_EQ(c.center(), v2(2, 0));
  EXPECT_NEAR(c.radius_sq(), 0.25 * 0.75, 1e-15);
}

TEST(LemmaShrinkBall, EpsNearOneCollapses) {
  const Ball c = lemma_shrink_ball(v2(1, 0), 1.0, 1.0 - 1e-12, 0.0);
  EXPECT_EQ(c.radius_sq(), 0.0);
}

TEST(LemmaShrinkBall, Preconditions) {
  try {
    (void)lemma_shrink_ball(v2(0.5, 0), 1.0, 0.25, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::precondition_violated);
  }
  EXPECT_THROW((void)lemma_shrink_ball(v2(1, 0), 1.0, 0.0, 0.0), Error);
  EXPECT_THROW((void)lemma_shrink_ball(v2(1, 0), 1.0, 0.5, -1.0), Error);
}

TEST(LemmaShrinkBall, RandomInstancesBoundAndContain) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = 2 + trial % 4;
    const double eps = 0.01 + 0.98 * u(rng);
    const double g = 1.2 * u(rng);
    Vector a = testing::random_vector(rng, n);
    a = a.normalized() * (g + 1.5 * u(rng));
    const double delta = 0.5 * (1.0 - std::sqrt(eps)) * u(rng);
    const Ball c = lemma_shrink_ball(a, g, eps, delta);
    ASSERT_LE(c.radius_sq(), 1.0 - std::sqrt(eps) - delta + 1e-12);
    const double r1 = 1.0 - eps * g * g - delta;
    const double r2 = g * g * (1.0 - eps) - delta;
    if (r1 <= 0.0 || r2 <= 0.0) continue;
    const Ball b1(Vector::Zero(n), r1);
    const Ball b2(a, r2);
    if (!intersects(b1, b2)) continue;
    for (const Vector& p : testing::box_sample_intersection(Vector::Zero(n), r1, a, r2, 30, trial,
                                                            2'000'000)) {
      ASSERT_TRUE(contains(c, p, 1e-9)) << "trial " << trial;
    }
  }
}

TEST(Contains, BoundaryAndOutside) {
  const Ball b(v2(0, 0), 1.0);
  EXPECT_TRUE(contains(b, v2(1, 0), 0.0));
  EXPECT_FALSE(contains(b, v2(1.1, 0), 0.0));
  EXPECT_THROW((void)contains(b, Vector::Zero(3), 0.0), Error);
}

TEST(SampleIntersection, IdenticalBallsAndDeterminism) {
  const Ball a(v2(0, 0), 1.0);
  const auto pts = sample_intersection(a, a, 100, 3);
  ASSERT_EQ(pts.size(), 100u);
  for (const Vector& p : pts) EXPECT_LE(p.norm(), 1.0);
  EXPECT_EQ(pts, sample_intersection(a, a, 100, 3));
}

TEST(SampleIntersection, LensMembership) {
  const Ball a(v2(0, 0), 1.0);
  const Ball b(v2(1, 0), 1.0);
  const auto pts = sample_intersection(a, b, 1000, 7);
  ASSERT_EQ(pts.size(), 1000u);
  for (const Vector& p : pts) {
    EXPECT_LE(p.squaredNorm(), 1.0);
    EXPECT_LE((p - b.center()).squaredNorm(), 1.0);
  }
}

TEST(SampleIntersection, TangentBallsStall) {
  try {
    const auto pts = sample_intersection(Ball(v2(0, 0), 1.0), Ball(v2(2, 0), 1.0), 10, 1);
    for (const Vector& p : pts) EXPECT_LE((p - v2(1, 0)).norm(), 1e-6);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::sampling_stalled);
  }
}

TEST(SampleIntersection, DisjointAndDegenerate) {
  EXPECT_THROW((void)sample_intersection(Ball(v2(0, 0), 1.0), Ball(v2(5, 0), 1.0), 1, 0), Error);
  EXPECT_THROW((void)sample_intersection(Ball(Vector(0), 1.0), Ball(Vector(0), 1.0), 1, 0), Error);
}

}  // namespace
}  // namespace geod
