#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "geod/geometry.hpp"
#include "geod/optimizers/trace.hpp"

namespace geod {

/// Strong convexity modulus the geometric methods trust. Overridable so a
/// caller can run with a guessed alpha; a guess above the true modulus
/// surfaces as AlphaTooLarge.
struct GeometricOptions {
  std::optional<double> alpha;
};

namespace detail {

inline double resolve_alpha(const Oracle& oracle, const GeometricOptions& geo) {
  const double alpha = geo.alpha.value_or(oracle.spec().alpha);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(Errc::invalid_parameter, "alpha must be positive");
  }
  return alpha;
}

/// |g|²/alpha² - (2/alpha)(f_from - f_to), the squared radius of the
/// strong-convexity ball tightened by an observed decrease. For a valid alpha
/// it is nonnegative, so a negative value beyond rounding means alpha is
/// too large.
inline double tightened_radius_sq(double grad_sq, double alpha, double f_from, double f_to) {
  const double base = grad_sq / (alpha * alpha);
  const double r = base - (2.0 / alpha) * (f_from - f_to);
  if (r >= 0.0) return r;
  const double rounding = 1e-12 * base + (2.0 / alpha) * 64.0 *
                                             std::numeric_limits<double>::epsilon() *
                                             (std::abs(f_from) + std::abs(f_to));
  if (r >= -rounding) return 0.0;
  throw Error(Errc::alpha_too_large, "strong-convexity ball has squared radius " +
                                         std::to_string(r) + "; alpha exceeds the true modulus");
}

inline Ball enclose_or_alpha_error(const Ball& a, const Ball& b) {
  try {
    return min_enclosing_ball(a, b);
  } catch (const Error& e) {
    if (e.code() == Errc::disjoint_balls) {
      throw Error(Errc::alpha_too_large,
                  std::string("localization balls are disjoint (") + e.what() + ")");
    }
    throw;
  }
}

}  // namespace detail

/// Geometric descent with line searches. Needs only alpha.
///
/// Each iteration runs a combining line search from x_{k-1}^+ toward the
/// previous center, one gradient evaluation at the result x_k, a line search
/// along -grad f(x_k) giving x_k^+, and then replaces the localization ball
/// by the minimum enclosing ball of
///   B(x_k - grad/alpha, |grad|²/alpha² - (2/alpha)(f(x_k) - f(x_k^+)))
///   B(c_{k-1}, R_{k-1}² - (2/alpha)(f(x_{k-1}^+) - f(x_k^+))).
/// Records carry f(x_k^+), which strictly decreases: an iteration that fails
/// to lower f in floating point ends the run with StopReason::stalled and is
/// not recorded. A second ball that has shrunk to nothing ends the run with
/// StopReason::radius_collapsed.
inline IterationTrace run_geod(const Oracle& oracle, const Vector& x0, const StoppingRule& stop,
                               const RunOptions& opts = {}, const GeometricOptions& geo = {}) {
  detail::require_start(oracle, x0);
  const double alpha = detail::resolve_alpha(oracle, geo);
  detail::Meter meter(oracle, opts);
  IterationTrace trace;
  trace.method = "geod";

  const GradientResult start = meter.eval(x0);
  const double g0_norm = start.gradient.norm();
  const detail::ResolvedStop rule(stop, oracle.dimension(), g0_norm);

  LineSearchResult first = meter.search(x0, x0 - start.gradient);
  Vector x_plus = std::move(first.point);
  double f_plus = first.value;
  Vector center = x0 - start.gradient / alpha;
  double radius_sq =
      detail::tightened_radius_sq(start.gradient.squaredNorm(), alpha, start.value, f_plus);

  auto notify = [&](int k, const Vector& gpoint, const Vector& grad,
                    const std::optional<Vector>& prev_center) {
    if (!opts.observer) return;
    IterationState s;
    s.k = k;
    s.point = x_plus;
    s.value = f_plus;
    s.gradient_point = gpoint;
    s.gradient = grad;
    s.previous_center = prev_center;
    s.ball = Ball(center, radius_sq);
    opts.observer(s);
  };

  IterationRecord rec = meter.record(0, f_plus, g0_norm, radius_sq);
  detail::push(trace, opts, rec, x_plus);
  notify(0, x0, start.gradient, std::nullopt);
  std::optional<StopReason> reason = rule.check(rec);

  for (int k = 1; !reason; ++k) {
    const LineSearchResult combined = meter.search(x_plus, center);
    const Vector& xk = combined.point;
    const GradientResult gk = meter.eval(xk);
    LineSearchResult stepped = meter.search(xk, xk - gk.gradient);
    const double g_norm = gk.gradient.norm();

    if (!(stepped.value < f_plus)) {
      // No representable decrease left; the iteration is dropped.
      reason = gk.gradient.norm() <= rule.grad_tol ? StopReason::grad_tol : StopReason::stalled;
      break;
    }
    const double rb_sq = radius_sq - (2.0 / alpha) * (f_plus - stepped.value);
    const Vector prev_center = center;
    x_plus = std::move(stepped.point);
    f_plus = stepped.value;

    if (g_norm <= rule.grad_tol) {
      rec = meter.record(k, f_plus, g_norm, radius_sq);
      detail::push(trace, opts, rec, x_plus);
      notify(k, xk, gk.gradient, prev_center);
      reason = StopReason::grad_tol;
      break;
    }

    const double ra_sq =
        detail::tightened_radius_sq(gk.gradient.squaredNorm(), alpha, gk.value, f_plus);
    if (rb_sq <= 0.0) {
      // The previous ball has been used up: x* is pinned to rounding level.
      radius_sq = 0.0;
      rec = meter.record(k, f_plus, g_norm, radius_sq);
      detail::push(trace, opts, rec, x_plus);
      notify(k, xk, gk.gradient, prev_center);
      reason = StopReason::radius_collapsed;
      break;
    }
    const Ball next = detail::enclose_or_alpha_error(Ball(xk - gk.gradient / alpha, ra_sq),
                                                     Ball(prev_center, rb_sq));
    center = next.center();
    radius_sq = next.radius_sq();

    rec = meter.record(k, f_plus, g_norm, radius_sq);
    detail::push(trace, opts, rec, x_plus);
    notify(k, xk, gk.gradient, prev_center);
    reason = rule.check(rec);
  }
  trace.reason = *reason;
  trace.final_point = x_plus;
  return trace;
}

/// The fixed-step variant with the proven 1 - 1/sqrt(kappa) shrink. Needs alpha
/// and beta. x_k^+ is x_k - grad/beta, the combining step is LS(c_k, x_k^+),
/// and the ball update encloses
///   B(c_k, R_k² - |grad|²/(alpha² kappa)) ∩ B(x_{k+1}^{++}, |grad|²/alpha² (1 - 1/kappa)).
/// Every step is checked against R_{k+1}² <= (1 - 1/sqrt(kappa)) R_k²
/// (slack 1e-9 R_0²); a failure throws RateViolation. Records carry f at the
/// gradient point x_k. If the ball collapses, its center is the answer.
inline IterationTrace run_geod_theory(const Oracle& oracle, const Vector& x0,
                                      const StoppingRule& stop, const RunOptions& opts = {},
                                      const GeometricOptions& geo = {}) {
  detail::require_start(oracle, x0);
  const double alpha = detail::resolve_alpha(oracle, geo);
  if (!oracle.spec().beta) {
    throw Error(Errc::precondition_violated, "run_geod_theory needs a known beta");
  }
  const double beta = *oracle.spec().beta;
  const double kappa = std::max(beta / alpha, 1.0);
  const double rate = 1.0 - 1.0 / std::sqrt(kappa);

  detail::Meter meter(oracle, opts);
  IterationTrace trace;
  trace.method = "geod_theory";

  GradientResult g = meter.eval(x0);
  const detail::ResolvedStop rule(stop, oracle.dimension(), g.gradient.norm());
  Vector x = x0;
  Vector center = x0 - g.gradient / alpha;
  double radius_sq = (1.0 - 1.0 / kappa) * g.gradient.squaredNorm() / (alpha * alpha);
  const double r0_sq = radius_sq;
  Vector x_plus = x0 - g.gradient / beta;

  auto notify = [&](int k, const std::optional<Vector>& prev_center) {
    if (!opts.observer) return;
    IterationState s;
    s.k = k;
    s.point = x;
    s.value = g.value;
    s.gradient_point = x;
    s.gradient = g.gradient;
    s.x_plus = x_plus;
    s.previous_center = prev_center;
    s.ball = Ball(center, radius_sq);
    opts.observer(s);
  };

  IterationRecord rec = meter.record(0, g.value, g.gradient.norm(), radius_sq);
  detail::push(trace, opts, rec, x);
  notify(0, std::nullopt);
  std::optional<StopReason> reason = rule.check(rec);
  if (!reason && radius_sq <= 0.0) reason = StopReason::radius_collapsed;

  for (int k = 1; !reason; ++k) {
    const Vector prev_center = center;
    x = meter.search(center, x_plus).point;
    g = meter.eval(x);
    const double grad_sq = g.gradient.squaredNorm();
    x_plus = x - g.gradient / beta;

    const double shrunk = radius_sq - grad_sq / (alpha * alpha * kappa);
    if (shrunk <= 0.0) {
      radius_sq = 0.0;
      reason = StopReason::radius_collapsed;
    } else {
      const Ball next = detail::enclose_or_alpha_error(
          Ball(x - g.gradient / alpha, grad_sq / (alpha * alpha) * (1.0 - 1.0 / kappa)),
          Ball(center, shrunk));
      if (next.radius_sq() > rate * radius_sq + 1e-9 * r0_sq) {
        throw Error(Errc::rate_violation,
                    "iteration " + std::to_string(k) + ": R² " +
                        std::to_string(next.radius_sq()) + " > (1 - 1/sqrt(kappa)) * " +
                        std::to_string(radius_sq));
      }
      center = next.center();
      radius_sq = next.radius_sq();
    }
    rec = meter.record(k, g.value, std::sqrt(grad_sq), radius_sq);
    detail::push(trace, opts, rec, x);
    notify(k, prev_center);
    if (!reason) reason = rule.check(rec);
  }
  trace.reason = *reason;
  trace.final_point = *reason == StopReason::radius_collapsed ? center : x;
  return trace;
}

/// The non-accelerated geometric method: keep B(x_k, R_k²) ∋ x*, intersect
/// it with B(x_k^{++}, (1 - 1/kappa)|grad|²/alpha²) and move to the center
/// of the enclosing ball. R_k² <= (1 - 1/kappa)^k R_0². The caller
/// guarantees |x* - x0|² <= r0_sq. Records carry f(x_k) and R_k².
inline IterationTrace run_geo_suboptimal(const Oracle& oracle, const Vector& x0, double r0_sq,
                                         const StoppingRule& stop, const RunOptions& opts = {},
                                         const GeometricOptions& geo = {}) {
  detail::require_start(oracle, x0);
  if (!(r0_sq >= 0.0) || !std::isfinite(r0_sq)) {
    throw Error(Errc::invalid_parameter, "R0² must be finite and >= 0");
  }
  const double alpha = detail::resolve_alpha(oracle, geo);
  if (!oracle.spec().beta) {
    throw Error(Errc::precondition_violated, "run_geo_suboptimal needs a known beta");
  }
  const double kappa = std::max(*oracle.spec().beta / alpha, 1.0);

  detail::Meter meter(oracle, opts);
  IterationTrace trace;
  trace.method = "geo_subopt";

  Vector x = x0;
  double radius_sq = r0_sq;
  std::optional<detail::ResolvedStop> rule;
  std::optional<StopReason> reason;
  for (int k = 0; !reason; ++k) {
    const GradientResult g = meter.eval(x);
    if (!rule) rule.emplace(stop, oracle.dimension(), g.gradient.norm());
    const IterationRecord rec = meter.record(k, g.value, g.gradient.norm(), radius_sq);
    detail::push(trace, opts, rec, x);
    if (opts.observer) {
      IterationState s;
      s.k = k;
      s.point = x;
      s.value = g.value;
      s.gradient_point = x;
      s.gradient = g.gradient;
      s.ball = Ball(x, radius_sq);
      opts.observer(s);
    }
    reason = rule->check(rec);
    if (reason) break;
    const Ball next = detail::enclose_or_alpha_error(
        Ball(x - g.gradient / alpha, (1.0 - 1.0 / kappa) * g.gradient.squaredNorm() / (alpha * alpha)),
        Ball(x, radius_sq));
    x = next.center();
    radius_sq = next.radius_sq();
  }
  trace.reason = *reason;
  trace.final_point = x;
  return trace;
}

}  // namespace geod
