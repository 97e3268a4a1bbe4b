#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "geod/optimizers/trace.hpp"

namespace geod {

/// Steepest descent with exact line search: x_{k+1} = LS(x_k, x_k - grad f(x_k)).
inline IterationTrace run_steepest_descent(const Oracle& oracle, const Vector& x0,
                                           const StoppingRule& stop, const RunOptions& opts = {}) {
  detail::require_start(oracle, x0);
  detail::Meter meter(oracle, opts);
  IterationTrace trace;
  trace.method = "sd";

  Vector x = x0;
  std::optional<detail::ResolvedStop> rule;
  std::optional<StopReason> reason;
  for (int k = 0; !reason; ++k) {
    const GradientResult g = meter.eval(x);
    if (!rule) rule.emplace(stop, oracle.dimension(), g.gradient.norm());
    const IterationRecord rec = meter.record(k, g.value, g.gradient.norm());
    detail::push(trace, opts, rec, x);
    if (opts.observer) {
      IterationState s;
      s.k = k;
      s.point = x;
      s.value = g.value;
      s.gradient_point = x;
      s.gradient = g.gradient;
      opts.observer(s);
    }
    reason = rule->check(rec);
    if (reason) break;
    x = meter.search(x, x - g.gradient).point;
  }
  trace.reason = *reason;
  trace.final_point = x;
  return trace;
}

/// Momentum parameters for the accelerated baselines.
struct AcceleratedOptions {
  double kappa_hint = 1.0;        // theta = (sqrt(kappa) - 1) / (sqrt(kappa) + 1)
  std::optional<double> beta;     // step 1/beta; defaults to the oracle's beta
};

namespace detail {

inline double momentum(double kappa_hint) {
  if (!(kappa_hint >= 1.0) || !std::isfinite(kappa_hint)) {
    throw Error(Errc::invalid_parameter, "kappa_hint must be >= 1");
  }
  const double s = std::sqrt(kappa_hint);
  return (s - 1.0) / (s + 1.0);
}

}  // namespace detail

/// Accelerated gradient with constant step and constant momentum:
///   x_{k+1} = y_k - grad f(y_k) / beta
///   y_{k+1} = x_{k+1} + theta (x_{k+1} - x_k).
/// Records carry f(x_k) (one extra value call per iteration) and |grad f(y_k)|.
/// The trace need not be monotone.
inline IterationTrace run_afg(const Oracle& oracle, const Vector& x0, const StoppingRule& stop,
                              const AcceleratedOptions& acc, const RunOptions& opts = {}) {
  detail::require_start(oracle, x0);
  const std::optional<double> beta = acc.beta ? acc.beta : oracle.spec().beta;
  if (!beta || !(*beta > 0.0)) {
    throw Error(Errc::precondition_violated, "run_afg needs beta (or an estimate)");
  }
  const double theta = detail::momentum(acc.kappa_hint);
  detail::Meter meter(oracle, opts);
  IterationTrace trace;
  trace.method = "afg";

  Vector x = x0;
  Vector y = x0;
  GradientResult g = meter.eval(y);
  const detail::ResolvedStop rule(stop, oracle.dimension(), g.gradient.norm());
  double fx = g.value;

  auto emit = [&](int k) {
    const IterationRecord rec = meter.record(k, fx, g.gradient.norm());
    detail::push(trace, opts, rec, x);
    if (opts.observer) {
      IterationState s;
      s.k = k;
      s.point = x;
      s.value = fx;
      s.gradient_point = y;
      s.gradient = g.gradient;
      opts.observer(s);
    }
    return rule.check(rec);
  };

  std::optional<StopReason> reason = emit(0);
  for (int k = 1; !reason; ++k) {
    Vector x_next = y - g.gradient / *beta;
    fx = meter.value(x_next);
    y = x_next + theta * (x_next - x);
    x = std::move(x_next);
    g = meter.eval(y);
    reason = emit(k);
  }
  trace.reason = *reason;
  trace.final_point = x;
  return trace;
}

/// Accelerated gradient whose gradient step is an exact line search, with
/// function restart: a step that would raise f is discarded and the momentum
/// is dropped (y = x), so the next step is a plain steepest-descent step.
/// Records carry f(x_k), which is non-increasing.
inline IterationTrace run_afg_restart(const Oracle& oracle, const Vector& x0,
                                      const StoppingRule& stop, const AcceleratedOptions& acc,
                                      const RunOptions& opts = {}) {
  detail::require_start(oracle, x0);
  const double theta = detail::momentum(acc.kappa_hint);
  detail::Meter meter(oracle, opts);
  IterationTrace trace;
  trace.method = "afg_restart";

  Vector x = x0;
  Vector y = x0;
  GradientResult g = meter.eval(y);
  const detail::ResolvedStop rule(stop, oracle.dimension(), g.gradient.norm());
  double fx = g.value;

  auto emit = [&](int k) {
    const IterationRecord rec = meter.record(k, fx, g.gradient.norm());
    detail::push(trace, opts, rec, x);
    if (opts.observer) {
      IterationState s;
      s.k = k;
      s.point = x;
      s.value = fx;
      s.gradient_point = y;
      s.gradient = g.gradient;
      opts.observer(s);
    }
    return rule.check(rec);
  };

  std::optional<StopReason> reason = emit(0);
  for (int k = 1; !reason; ++k) {
    LineSearchResult step = meter.search(y, y - g.gradient);
    if (step.value > fx) {
      y = x;
      ++trace.restarts;
    } else {
      y = step.point + theta * (step.point - x);
      x = std::move(step.point);
      fx = step.value;
    }
    g = meter.eval(y);
    reason = emit(k);
  }
  trace.reason = *reason;
  trace.final_point = x;
  return trace;
}

}  // namespace geod
