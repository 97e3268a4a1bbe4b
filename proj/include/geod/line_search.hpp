#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <string>
#include <utility>

#include "geod/types.hpp"

namespace geod {

/// phi(t) = f(base + t * direction) together with phi'(t).
struct LinePoint {
  double value;
  double derivative;
};

/// f restricted to a line. `eval` is built by the oracle so that probes reuse
/// whatever it precomputed along base and direction.
struct LineRestriction {
  Vector base;
  Vector direction;
  std::function<LinePoint(double)> eval;
};

/// Bisection runs until the bracket is narrower than tol_t (1 + |t|), then
/// takes one secant step. A positive tol_grad adds an early exit at
/// |phi'(t)| <= tol_grad |phi'(0)|.
struct LineSearchOptions {
  double tol_grad = 0.0;
  double tol_t = 1e-12;
  int max_probes = 200;
};

struct LineSearchResult {
  double t_star = 0.0;
  Vector point;
  double value = 0.0;
  double derivative_at_t = 0.0;
  int probes = 0;
  bool converged = true;
};

namespace detail {

inline double convexity_slack(double reference) noexcept {
  return 1e-9 * (1.0 + std::abs(reference));
}

}  // namespace detail

/// Exact minimization of a convex, differentiable phi over all of R.
///
/// The sign of phi'(0) gives the downhill side; the step doubles from 1 on
/// that side until phi' changes sign, then the bracket is bisected on phi'.
/// A result that would increase phi falls back to t = 0. Running out of
/// probes is not an error: the best point so far comes back with
/// `converged == false`.
inline LineSearchResult exact_line_search(const LineRestriction& line,
                                          const LineSearchOptions& opts = {}) {
  if (line.direction.size() != line.base.size()) {
    throw Error(Errc::dimension_mismatch, "line restriction base vs direction");
  }
  if (line.direction.squaredNorm() == 0.0) {
    throw Error(Errc::zero_direction, "exact_line_search");
  }

  LineSearchResult result;
  const LinePoint at_zero = line.eval(0.0);
  int probes = 1;
  if (!std::isfinite(at_zero.value) || !std::isfinite(at_zero.derivative)) {
    throw Error(Errc::non_finite_input, "line restriction at t = 0");
  }

  auto finish = [&](double t, const LinePoint& p, bool converged) {
    if (p.value > at_zero.value || !std::isfinite(p.value)) {
      t = 0.0;
      result.value = at_zero.value;
      result.derivative_at_t = at_zero.derivative;
    } else {
      result.value = p.value;
      result.derivative_at_t = p.derivative;
    }
    result.t_star = t;
    result.point = line.base + t * line.direction;
    result.probes = probes;
    result.converged = converged;
    return result;
  };

  const double d0 = at_zero.derivative;
  const double grad_stop = opts.tol_grad * std::abs(d0);
  if (d0 == 0.0) return finish(0.0, at_zero, true);

  // Work in s = sign * t so that phi is decreasing at s = 0.
  const double sign = d0 < 0.0 ? 1.0 : -1.0;
  double lo = 0.0;
  LinePoint lo_pt = at_zero;
  double hi = 1.0;
  LinePoint hi_pt{};
  double best_s = 0.0;
  LinePoint best_pt = at_zero;

  auto slope = [&](const LinePoint& p) { return sign * p.derivative; };
  auto note = [&](double s, const LinePoint& p) {
    if (p.value < best_pt.value) {
      best_s = s;
      best_pt = p;
    }
  };

  for (;;) {
    if (probes >= opts.max_probes) return finish(sign * best_s, best_pt, false);
    hi_pt = line.eval(sign * hi);
    ++probes;
    if (!std::isfinite(hi_pt.derivative) || !std::isfinite(hi_pt.value)) {
      throw Error(Errc::non_finite_input, "line restriction at t = " + std::to_string(sign * hi));
    }
    note(hi, hi_pt);
    if (slope(hi_pt) < slope(lo_pt) - detail::convexity_slack(slope(lo_pt))) {
      throw Error(Errc::non_convex_detected, "phi' decreased while bracketing");
    }
    if (slope(hi_pt) >= 0.0) break;
    lo = hi;
    lo_pt = hi_pt;
    hi *= 2.0;
  }
  if (std::abs(hi_pt.derivative) <= grad_stop || hi_pt.derivative == 0.0) {
    return finish(sign * hi, hi_pt, true);
  }

  // phi is flat to rounding near t*; pick by |phi'|, not by value.
  auto flattest = [&](bool converged) {
    return std::abs(lo_pt.derivative) <= std::abs(hi_pt.derivative)
               ? finish(sign * lo, lo_pt, converged)
               : finish(sign * hi, hi_pt, converged);
  };
  // One secant step on the final bracket; exact when phi' is linear there.
  auto polish = [&]() {
    const double span = slope(hi_pt) - slope(lo_pt);
    if (probes < opts.max_probes && span > 0.0) {
      const double s = lo - slope(lo_pt) * (hi - lo) / span;
      if (s > lo && s < hi) {
        const LinePoint p = line.eval(sign * s);
        ++probes;
        if (std::isfinite(p.value) && std::isfinite(p.derivative) &&
            std::abs(p.derivative) < std::min(std::abs(lo_pt.derivative),
                                              std::abs(hi_pt.derivative))) {
          return finish(sign * s, p, true);
        }
      }
    }
    return flattest(true);
  };
  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= opts.tol_t * (1.0 + std::abs(hi)) || mid <= lo || mid >= hi) {
      return polish();
    }
    if (probes >= opts.max_probes) return flattest(false);
    const LinePoint mid_pt = line.eval(sign * mid);
    ++probes;
    if (!std::isfinite(mid_pt.derivative) || !std::isfinite(mid_pt.value)) {
      throw Error(Errc::non_finite_input, "line restriction at t = " + std::to_string(sign * mid));
    }
    const double m = slope(mid_pt);
    if (m < slope(lo_pt) - detail::convexity_slack(slope(lo_pt)) ||
        m > slope(hi_pt) + detail::convexity_slack(slope(hi_pt))) {
      throw Error(Errc::non_convex_detected, "phi' left its bracket during bisection");
    }
    if (std::abs(mid_pt.derivative) <= grad_stop || mid_pt.derivative == 0.0) {
      return finish(sign * mid, mid_pt, true);
    }
    if (m < 0.0) {
      lo = mid;
      lo_pt = mid_pt;
    } else {
      hi = mid;
      hi_pt = mid_pt;
    }
  }
}

/// Anything that can build a LineRestriction between two points.
template <class O>
concept LineRestrictable = requires(const O& o, const Vector& x) {
  { o.restrict(x, x) } -> std::convertible_to<LineRestriction>;
};

/// Line search along the whole line through x and y (not only the segment).
/// Returns x unchanged when x == y.
template <LineRestrictable O>
LineSearchResult line_search(const O& oracle, const Vector& x, const Vector& y,
                             const LineSearchOptions& opts = {}) {
  require_same_dimension(x, y, "line_search");
  Vector direction = y - x;
  if (direction.squaredNorm() == 0.0) {
    const LineRestriction line = oracle.restrict(x, direction);
    const LinePoint p = line.eval(0.0);
    LineSearchResult r;
    r.point = x;
    r.value = p.value;
    r.derivative_at_t = 0.0;
    r.probes = 1;
    return r;
  }
  return exact_line_search(oracle.restrict(x, direction), opts);
}

/// The LS map: argmin over t in R of f(x + t (y - x)).
template <LineRestrictable O>
Vector ls_point(const O& oracle, const Vector& x, const Vector& y,
                const LineSearchOptions& opts = {}) {
  return line_search(oracle, x, y, opts).point;
}

}  // namespace geod
