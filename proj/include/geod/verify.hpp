#pragma once

#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geod/bench/problems.hpp"
#include "geod/geometry.hpp"
#include "geod/objectives/smoothed_hinge.hpp"
#include "geod/objectives/worst_case.hpp"
#include "geod/optimizers/geometric.hpp"
#include "geod/synthetic.hpp"

namespace geod::verify {

struct CheckResult {
  std::string name;
  bool passed = true;
  int cases = 0;
  int sampled = 0;  // cases whose intersection was sampled
  int skipped = 0;  // sampling stalled on a too-thin intersection
  std::string detail;
};

struct VerifyOptions {
  int quadratics = 100;
  int lemma_instances = 1000;
  int ball_pairs = 1000;
  int samples_per_case = 100;
  int gradient_points = 1000;
  std::uint64_t seed = 1;
};

namespace detail {

inline Vector uniform_vector(std::mt19937_64& rng, Index n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline void fail(CheckResult& r, std::string msg) {
  if (r.passed) r.detail = std::move(msg);
  r.passed = false;
}

/// Points of A ∩ B where the distance to any point on the center axis is
/// largest: the four axial apexes that lie in both balls and `rim` points
/// on the circle where the spheres meet.
inline std::vector<Vector> lens_extremes(const Ball& a, const Ball& b, int rim,
                                         std::mt19937_64& rng) {
  std::vector<Vector> out;
  const Vector delta = b.center() - a.center();
  const double d = delta.norm();
  const Index n = delta.size();
  Vector e = Vector::Zero(n);
  if (d > 0.0) {
    e = delta / d;
  } else {
    e[0] = 1.0;
  }
  const double ra = std::sqrt(a.radius_sq());
  const double rb = std::sqrt(b.radius_sq());
  for (const Vector& p : {Vector(a.center() + ra * e), Vector(a.center() - ra * e),
                          Vector(b.center() + rb * e), Vector(b.center() - rb * e)}) {
    if (contains(a, p, 1e-12) && contains(b, p, 1e-12)) out.push_back(p);
  }
  if (d == 0.0 || n < 2) return out;
  const double s = (d * d + a.radius_sq() - b.radius_sq()) / (2.0 * d);
  const double rho_sq = a.radius_sq() - s * s;
  if (!(rho_sq > 0.0)) return out;
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < rim; ++i) {
    Vector v(n);
    for (Index j = 0; j < n; ++j) v[j] = normal(rng);
    v -= v.dot(e) * e;
    if (v.norm() == 0.0) continue;
    out.push_back(a.center() + s * e + std::sqrt(rho_sq) * v.normalized());
  }
  return out;
}

}  // namespace detail

/// Fixed-step GeoD on random diagonal quadratics (n <= 50, kappa in
/// {10, 100, 1000}): x* stays in every ball and R² shrinks by
/// 1 - 1/sqrt(kappa) per step, within 1e-9 R_0².
inline CheckResult check_theory_rate(const VerifyOptions& o) {
  CheckResult r{"theory_rate_and_containment"};
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<int> dim(1, 50);
  const double kappas[] = {10.0, 100.0, 1000.0};
  for (int i = 0; i < o.quadratics; ++i) {
    const double kappa = kappas[i % 3];
    const Index n = dim(rng);
    const auto oracle = bench::random_quadratic(n, kappa, rng());
    const Vector x_star = *oracle->minimizer();
    double r0_sq = -1.0;
    double prev = 0.0;
    RunOptions opts;
    opts.observer = [&](const IterationState& s) {
      const double rsq = s.ball->radius_sq();
      if (r0_sq < 0.0) r0_sq = rsq;
      const double slack = 1e-9 * r0_sq;
      if ((x_star - s.ball->center()).squaredNorm() > rsq + slack) {
        detail::fail(r, fmt::format("quadratic {} iteration {}: x* outside ball", i, s.k));
      }
      if (s.k > 0 && rsq > (1.0 - 1.0 / std::sqrt(kappa)) * prev + slack) {
        detail::fail(r, fmt::format("quadratic {} iteration {}: rate violated", i, s.k));
      }
      prev = rsq;
    };
    StoppingRule stop;
    stop.max_iters = 500;
    try {
      (void)run_geod_theory(*oracle, detail::uniform_vector(rng, n, -5, 5), stop, opts);
    } catch (const Error& e) {
      detail::fail(r, fmt::format("quadratic {}: {}", i, e.what()));
    }
    ++r.cases;
  }
  return r;
}

/// Output radius bound 1 - sqrt(eps) - delta and containment of the extreme
/// and sampled points of B(0, 1 - eps g² - delta) ∩ B(a, g²(1 - eps) - delta).
/// Instances are drawn with both radii positive and |a| uniform on
/// [g, r_1 + r_2 - 0.2 min(r_1, r_2)], so the intersection is nonempty and
/// at least a fifth of the smaller radius thick; draws with an empty range
/// are redrawn. Dimensions 1-5.
inline CheckResult check_shrink_lemma(const VerifyOptions& o) {
  CheckResult r{"shrink_lemma"};
  std::mt19937_64 rng(o.seed + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int i = 0; i < o.lemma_instances; ++i) {
    Index n = 0;
    double eps = 0.0;
    double g = 0.0;
    double delta = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double upper = 0.0;
    do {
      n = dim(rng);
      eps = 0.01 + 0.98 * u(rng);
      g = 0.05 + 1.15 * u(rng);
      const double room = std::min({1.0 - std::sqrt(eps), 1.0 - eps * g * g, g * g * (1.0 - eps)});
      delta = room > 0.0 ? 0.9 * room * u(rng) : 0.0;
      r1 = 1.0 - eps * g * g - delta;
      r2 = g * g * (1.0 - eps) - delta;
      upper = r1 > 0.0 && r2 > 0.0
                  ? std::sqrt(r1) + std::sqrt(r2) - 0.2 * std::sqrt(std::min(r1, r2))
                  : 0.0;
    } while (!(upper > g));
    Vector a = detail::uniform_vector(rng, n, -1, 1);
    if (a.norm() == 0.0) a[0] = 1.0;
    a = a.normalized() * (g + (upper - g) * u(rng));
    ++r.cases;
    try {
      const Ball c = lemma_shrink_ball(a, g, eps, delta);
      if (c.radius_sq() > 1.0 - std::sqrt(eps) - delta + 1e-12) {
        detail::fail(r, fmt::format("instance {}: radius² {} above bound", i, c.radius_sq()));
      }
      const Ball b1(Vector::Zero(n), r1);
      const Ball b2(a, r2);
      for (const Vector& p : detail::lens_extremes(b1, b2, 8, rng)) {
        if (!contains(c, p, 1e-9)) {
          detail::fail(r, fmt::format("instance {}: extreme lens point outside", i));
          break;
        }
      }
      for (const Vector& p :
           sample_intersection(b1, b2, static_cast<std::size_t>(o.samples_per_case), rng())) {
        if (!contains(c, p, 1e-9)) {
          detail::fail(r, fmt::format("instance {}: sampled point outside", i));
          break;
        }
      }
      ++r.sampled;
    } catch (const Error& e) {
      if (e.code() != Errc::sampling_stalled) {
        detail::fail(r, fmt::format("instance {}: {}", i, e.what()));
      } else {
        ++r.skipped;
      }
    }
  }
  return r;
}

/// The two-ball enclosing ball holds the extreme and sampled lens points and
/// is no larger than either input. Dimensions 2-20; the center distance is
/// uniform on [0, t (r_A + r_B)] with t falling from 0.95 at n = 2 to 0.5 at
/// n = 20 so that rejection sampling keeps an acceptance rate near 1e-3 or
/// better.
inline CheckResult check_enclosing_ball(const VerifyOptions& o) {
  CheckResult r{"enclosing_ball"};
  std::mt19937_64 rng(o.seed + 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 20);
  for (int i = 0; i < o.ball_pairs; ++i) {
    const Index n = dim(rng);
    const double t = 0.95 - 0.025 * static_cast<double>(n - 2);
    const double ra = 0.1 + 2.0 * u(rng);
    const double rb = 0.1 + 2.0 * u(rng);
    const Vector ca = detail::uniform_vector(rng, n, -3, 3);
    Vector dir = detail::uniform_vector(rng, n, -1, 1);
    if (dir.norm() == 0.0) dir[0] = 1.0;
    const Vector cb = ca + (t * (ra + rb) * u(rng)) * dir.normalized();
    const Ball a(ca, ra * ra);
    const Ball b(cb, rb * rb);
    ++r.cases;
    try {
      const Ball m = min_enclosing_ball(a, b);
      if (m.radius_sq() > std::min(a.radius_sq(), b.radius_sq())) {
        detail::fail(r, fmt::format("pair {}: enclosing ball larger than an input", i));
      }
      for (const Vector& p : detail::lens_extremes(a, b, 8, rng)) {
        if (!contains(m, p, 1e-9)) {
          detail::fail(r, fmt::format("pair {}: extreme lens point outside", i));
          break;
        }
      }
      for (const Vector& p :
           sample_intersection(a, b, static_cast<std::size_t>(o.samples_per_case), rng())) {
        if (!contains(m, p, 1e-9)) {
          detail::fail(r, fmt::format("pair {}: sampled point outside", i));
          break;
        }
      }
      ++r.sampled;
    } catch (const Error& e) {
      if (e.code() != Errc::sampling_stalled) {
        detail::fail(r, fmt::format("pair {}: {}", i, e.what()));
      } else {
        ++r.skipped;
      }
    }
  }
  return r;
}

/// Central differences, h = 1e-5 (1 + |x|), against the analytic gradient of
/// every objective family; relative tolerance 1e-5.
inline CheckResult check_gradients(const VerifyOptions& o) {
  CheckResult r{"gradients"};
  std::mt19937_64 rng(o.seed + 3);
  const auto quad = bench::random_quadratic(8, 50.0, rng());
  const auto chain = worst_case_oracle(8, 100.0);
  const SmoothedHingeErmOracle erm(synthetic_classification(60, 8, 2.0, 0.5, rng()), 1e-3);
  const Oracle* families[] = {quad.get(), chain.get(), &erm};
  for (int i = 0; i < o.gradient_points; ++i) {
    const Oracle& f = *families[i % 3];
    const Vector x = detail::uniform_vector(rng, f.dimension(), -2, 2);
    const Vector g = f.eval(x).gradient;
    const double h = 1e-5 * (1.0 + x.norm());
    Vector fd(x.size());
    Vector xp = x;
    for (Index j = 0; j < x.size(); ++j) {
      xp[j] = x[j] + h;
      const double fp = f.value(xp);
      xp[j] = x[j] - h;
      const double fm = f.value(xp);
      xp[j] = x[j];
      fd[j] = (fp - fm) / (2.0 * h);
    }
    ++r.cases;
    if ((fd - g).norm() > 1e-5 * std::max(1.0, g.norm())) {
      detail::fail(r, fmt::format("{} at point {}: |fd - grad| = {}", f.name(), i, (fd - g).norm()));
    }
  }
  return r;
}

inline std::vector<CheckResult> run_all(const VerifyOptions& o) {
  return {check_theory_rate(o), check_shrink_lemma(o), check_enclosing_ball(o), check_gradients(o)};
}

}  // namespace geod::verify
