#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "geod/types.hpp"

namespace geod {

/// Closed Euclidean ball B(c, r²). The radius is stored squared, matching
/// the way every localization formula in this library produces it.
class Ball {
 public:
  /// Squared radii in [-kClampFraction * clamp_scale, 0) are rounded up to 0;
  /// anything more negative is a NegativeRadius error.
  static constexpr double kClampFraction = 1e-12;

  Ball(Vector center, double radius_sq, double clamp_scale = 1.0)
      : center_(std::move(center)), radius_sq_(radius_sq) {
    if (!all_finite(center_) || !std::isfinite(radius_sq_)) {
      throw Error(Errc::non_finite_input, "ball center or radius is not finite");
    }
    if (radius_sq_ < 0.0) {
      if (radius_sq_ >= -kClampFraction * std::max(clamp_scale, 1.0)) {
        radius_sq_ = 0.0;
      } else {
        throw Error(Errc::negative_radius, "squared radius " + std::to_string(radius_sq_));
      }
    }
  }

  [[nodiscard]] const Vector& center() const noexcept { return center_; }
  [[nodiscard]] double radius_sq() const noexcept { return radius_sq_; }
  [[nodiscard]] double radius() const noexcept { return std::sqrt(radius_sq_); }
  [[nodiscard]] Index dimension() const noexcept { return center_.size(); }

 private:
  Vector center_;
  double radius_sq_;
};

/// Distance slack under which two balls still count as intersecting.
inline double disjointness_tolerance(const Ball& a, const Ball& b) noexcept {
  return 1e-9 * (1.0 + a.radius() + b.radius());
}

inline bool intersects(const Ball& a, const Ball& b) {
  require_same_dimension(a.center(), b.center(), "intersects");
  const double dist = (a.center() - b.center()).norm();
  return dist <= a.radius() + b.radius() + disjointness_tolerance(a, b);
}

/// true iff |point - center|² <= r² + tol.
inline bool contains(const Ball& ball, const Vector& point, double tol = 0.0) {
  require_same_dimension(ball.center(), point, "contains");
  return (point - ball.center()).squaredNorm() <= ball.radius_sq() + tol;
}

/// Smallest ball containing A ∩ B, by the three-way case split on
/// |x_A - x_B|² against R_A² - R_B². When the radical hyperplane falls
/// between the two centers the answer is the ball through the intersection
/// sphere; otherwise the smaller ball already encloses the lens.
inline Ball min_enclosing_ball(const Ball& a, const Ball& b) {
  require_same_dimension(a.center(), b.center(), "min_enclosing_ball");
  const Vector diff = a.center() - b.center();
  const double dist_sq = diff.squaredNorm();
  const double ra_sq = a.radius_sq();
  const double rb_sq = b.radius_sq();

  if (std::sqrt(dist_sq) > a.radius() + b.radius() + disjointness_tolerance(a, b)) {
    throw Error(Errc::disjoint_balls,
                "centers " + std::to_string(std::sqrt(dist_sq)) + " apart, radii " +
                    std::to_string(a.radius()) + " + " + std::to_string(b.radius()));
  }

  const double gap = ra_sq - rb_sq;
  if (dist_sq > 0.0 && dist_sq >= std::abs(gap)) {
    Vector center = 0.5 * (a.center() + b.center()) - (gap / (2.0 * dist_sq)) * diff;
    // Same value as R_B² - (|Δ|² + R_B² - R_A²)² / (4|Δ|²), written so that
    // swapping A and B yields bit-identical output.
    double radius_sq = 0.5 * (ra_sq + rb_sq) - 0.25 * dist_sq - gap * gap / (4.0 * dist_sq);
    // Near-tangent pairs accepted by the disjointness tolerance land here.
    radius_sq = std::max(radius_sq, 0.0);
    return Ball(std::move(center), radius_sq);
  }
  if (dist_sq < gap) {
    return b;
  }
  // Includes coincident centers with equal radii.
  return a;
}

/// The enclosing ball built in the proof of the two-ball shrink lemma, in
/// normalized coordinates: B(0, 1 - eps g² - delta) ∩ B(a, g²(1 - eps) - delta)
/// lies inside the returned ball, whose squared radius is at most
/// 1 - sqrt(eps) - delta. Requires |a| >= g.
inline Ball lemma_shrink_ball(const Vector& a, double g, double eps, double delta) {
  if (!all_finite(a) || !std::isfinite(g) || !std::isfinite(eps) || !std::isfinite(delta)) {
    throw Error(Errc::non_finite_input, "lemma_shrink_ball");
  }
  if (g < 0.0 || delta < 0.0 || !(eps > 0.0 && eps < 1.0)) {
    throw Error(Errc::invalid_parameter, "need g >= 0, delta >= 0, eps in (0,1)");
  }
  const double a_norm = a.norm();
  if (a_norm < g) {
    throw Error(Errc::precondition_violated,
                "|a| = " + std::to_string(a_norm) + " < g = " + std::to_string(g));
  }
  const double g_sq = g * g;
  if (g_sq <= 0.5) {
    // An empty lens may produce a negative formula radius; any center works then.
    return Ball(a, std::max(g_sq * (1.0 - eps) - delta, 0.0));
  }
  const double x = (1.0 + a_norm * a_norm - g_sq) / (2.0 * a_norm);
  const double radius_sq = 1.0 - eps * g_sq - delta - x * x;
  return Ball((x / a_norm) * a, std::max(radius_sq, 0.0));
}

namespace detail {

inline Vector uniform_in_ball(const Ball& ball, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Index n = ball.dimension();
  Vector direction(n);
  double norm_sq = 0.0;
  do {
    for (Index i = 0; i < n; ++i) direction[i] = normal(rng);
    norm_sq = direction.squaredNorm();
  } while (norm_sq == 0.0);
  const double scale =
      ball.radius() * std::pow(unit(rng), 1.0 / static_cast<double>(n)) / std::sqrt(norm_sq);
  return ball.center() + scale * direction;
}

}  // namespace detail

/// Draws `count` points uniformly from A ∩ B by rejection from the smaller
/// ball. Deterministic for a fixed seed. Gives up with SamplingStalled once
/// at least a million draws have been made at an acceptance rate below 1e-6.
inline std::vector<Vector> sample_intersection(const Ball& a, const Ball& b, std::size_t count,
                                               std::uint64_t seed) {
  require_same_dimension(a.center(), b.center(), "sample_intersection");
  if (a.dimension() < 1) {
    throw Error(Errc::invalid_dimension, "sample_intersection needs dimension >= 1");
  }
  if (!intersects(a, b)) {
    throw Error(Errc::disjoint_balls, "sample_intersection");
  }
  const Ball& source = a.radius_sq() <= b.radius_sq() ? a : b;
  const Ball& other = a.radius_sq() <= b.radius_sq() ? b : a;

  constexpr std::uint64_t kMinAttempts = 1'000'000;
  constexpr double kMinAcceptance = 1e-6;

  std::mt19937_64 rng(seed);
  std::vector<Vector> points;
  points.reserve(count);
  std::uint64_t attempts = 0;
  while (points.size() < count) {
    Vector p = detail::uniform_in_ball(source, rng);
    ++attempts;
    if (contains(other, p) && contains(source, p)) {
      points.push_back(std::move(p));
    }
    if (attempts >= kMinAttempts &&
        static_cast<double>(points.size()) < kMinAcceptance * static_cast<double>(attempts)) {
      throw Error(Errc::sampling_stalled, "accepted " + std::to_string(points.size()) + " of " +
                                              std::to_string(attempts) + " draws");
    }
  }
  return points;
}

}  // namespace geod
