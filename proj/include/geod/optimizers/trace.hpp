#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geod/geometry.hpp"
#include "geod/line_search.hpp"
#include "geod/oracle.hpp"

namespace geod {

/// One row of a run. `value` is f at the iterate the method would return
/// at this point (x_k^+ for GeoD). `grad_norm` is the norm of the gradient
/// evaluated during the iteration. Counters are cumulative over the run.
struct IterationRecord {
  int k = 0;
  double value = 0.0;
  double grad_norm = 0.0;
  std::optional<double> radius_sq;
  std::int64_t gradient_calls = 0;
  std::int64_t value_calls = 0;
  std::int64_t line_searches = 0;
  std::int64_t ls_probes = 0;
};

enum class StopReason { grad_tol, target_value, radius_tol, radius_collapsed, stalled, max_iters };

constexpr std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::grad_tol: return "grad_tol";
    case StopReason::target_value: return "target_value";
    case StopReason::radius_tol: return "radius_tol";
    case StopReason::radius_collapsed: return "radius_collapsed";
    case StopReason::stalled: return "stalled";
    case StopReason::max_iters: return "max_iters";
  }
  return "unknown";
}

struct IterationTrace {
  std::string method;
  std::vector<IterationRecord> records;
  /// Point behind each record, filled when RunOptions::keep_iterates is set.
  std::vector<Vector> iterates;
  Vector final_point;
  StopReason reason = StopReason::max_iters;
  int restarts = 0;

  [[nodiscard]] std::size_t size() const noexcept { return records.size(); }
  [[nodiscard]] double final_value() const { return records.back().value; }
};

/// Default gradient tolerance is relative: grad_tol * (1 + |grad f(x0)|).
/// When max_iters is unset it becomes 10 * dimension + 1000.
struct StoppingRule {
  std::optional<int> max_iters;
  double grad_tol = 1e-10;
  bool grad_tol_relative = true;
  std::optional<double> target_value;
  std::optional<double> radius_tol;

  void validate() const {
    if (max_iters && *max_iters < 0) throw Error(Errc::invalid_parameter, "max_iters < 0");
    if (!(grad_tol >= 0.0)) throw Error(Errc::invalid_parameter, "grad_tol < 0");
    if (radius_tol && !(*radius_tol >= 0.0)) throw Error(Errc::invalid_parameter, "radius_tol < 0");
  }
};

/// Snapshot handed to an observer after each iteration.
struct IterationState {
  int k = 0;
  Vector point;                     // iterate behind the record
  double value = 0.0;
  Vector gradient_point;            // where the gradient was evaluated
  Vector gradient;
  std::optional<Vector> x_plus;     // fixed-step point, theory variant
  std::optional<Vector> previous_center;
  std::optional<Ball> ball;         // localization ball after the update
};

struct RunOptions {
  LineSearchOptions line_search;
  bool keep_iterates = false;
  std::function<void(const IterationState&)> observer;
};

namespace detail {

/// Counts the work of one run independently of the oracle's global counters,
/// so concurrent runs on a shared oracle account separately.
class Meter {
 public:
  Meter(const Oracle& oracle, const RunOptions& opts) : oracle_(oracle), opts_(opts) {}

  GradientResult eval(const Vector& x) {
    ++gradient_calls_;
    return oracle_.eval(x);
  }

  double value(const Vector& x) {
    ++value_calls_;
    return oracle_.value(x);
  }

  LineSearchResult search(const Vector& x, const Vector& y) {
    ++line_searches_;
    LineSearchResult r = line_search(oracle_, x, y, opts_.line_search);
    probes_ += r.probes;
    return r;
  }

  [[nodiscard]] IterationRecord record(int k, double value, double grad_norm,
                                       std::optional<double> radius_sq = std::nullopt) const {
    return {k, value, grad_norm, radius_sq, gradient_calls_, value_calls_, line_searches_, probes_};
  }

  [[nodiscard]] const Oracle& oracle() const noexcept { return oracle_; }

 private:
  const Oracle& oracle_;
  const RunOptions& opts_;
  std::int64_t gradient_calls_ = 0;
  std::int64_t value_calls_ = 0;
  std::int64_t line_searches_ = 0;
  std::int64_t probes_ = 0;
};

struct ResolvedStop {
  int max_iters;
  double grad_tol;
  std::optional<double> target_value;
  std::optional<double> radius_tol;

  ResolvedStop(const StoppingRule& rule, Index dimension, double grad0_norm) {
    rule.validate();
    max_iters = rule.max_iters.value_or(static_cast<int>(10 * dimension + 1000));
    grad_tol = rule.grad_tol_relative ? rule.grad_tol * (1.0 + grad0_norm) : rule.grad_tol;
    target_value = rule.target_value;
    radius_tol = rule.radius_tol;
  }

  [[nodiscard]] std::optional<StopReason> check(const IterationRecord& rec) const {
    if (rec.grad_norm <= grad_tol) return StopReason::grad_tol;
    if (target_value && rec.value <= *target_value) return StopReason::target_value;
    if (radius_tol && rec.radius_sq && *rec.radius_sq <= *radius_tol) return StopReason::radius_tol;
    if (rec.k >= max_iters) return StopReason::max_iters;
    return std::nullopt;
  }
};

inline void push(IterationTrace& trace, const RunOptions& opts, IterationRecord rec,
                 const Vector& point) {
  trace.records.push_back(rec);
  if (opts.keep_iterates) trace.iterates.push_back(point);
}

inline void require_start(const Oracle& oracle, const Vector& x0) {
  if (x0.size() != oracle.dimension()) {
    throw Error(Errc::dimension_mismatch, "x0 has dimension " + std::to_string(x0.size()));
  }
  if (!all_finite(x0)) throw Error(Errc::non_finite_input, "x0");
}

}  // namespace detail
}  // namespace geod
