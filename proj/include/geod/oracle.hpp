#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "geod/geometry.hpp"
#include "geod/line_search.hpp"
#include "geod/types.hpp"

namespace geod {

/// Constants an objective knows about itself.
struct OracleSpec {
  Index dimension = 0;
  double alpha = 0.0;              // strong convexity modulus
  std::optional<double> beta;      // gradient Lipschitz constant
  std::optional<double> f_star;    // optimal value, when known in closed form

  [[nodiscard]] std::optional<double> kappa() const {
    if (!beta) return std::nullopt;
    return *beta / alpha;
  }
};

struct GradientResult {
  double value = 0.0;
  Vector gradient;
};

/// Snapshot of the work an oracle has done. `forward_products` counts
/// computations of every a_i^T v for ERM objectives; other families leave
/// the product counters at zero.
struct OracleCounters {
  std::int64_t gradient_evals = 0;
  std::int64_t value_evals = 0;
  std::int64_t restrictions = 0;
  std::int64_t probes = 0;
  std::int64_t forward_products = 0;
  std::int64_t adjoint_products = 0;
};

/// A smooth, strongly convex objective. Immutable after construction and
/// safe to evaluate from several threads; only the counters change, and
/// those are atomic. A LineRestriction refers back to its oracle and must
/// not outlive it.
class Oracle {
 public:
  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;
  virtual ~Oracle() = default;

  [[nodiscard]] const OracleSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] Index dimension() const noexcept { return spec_.dimension; }
  [[nodiscard]] virtual std::string name() const = 0;

  /// Known minimizer, if the family has one in closed form.
  [[nodiscard]] virtual std::optional<Vector> minimizer() const { return std::nullopt; }

  [[nodiscard]] GradientResult eval(const Vector& x) const {
    check_point(x, "eval");
    gradient_evals_.fetch_add(1, std::memory_order_relaxed);
    return do_eval(x);
  }

  [[nodiscard]] double value(const Vector& x) const {
    check_point(x, "value");
    value_evals_.fetch_add(1, std::memory_order_relaxed);
    return do_value(x);
  }

  [[nodiscard]] LineRestriction restrict(const Vector& base, const Vector& direction) const {
    check_point(base, "restrict");
    if (direction.size() != spec_.dimension) {
      throw Error(Errc::dimension_mismatch, name() + " restrict direction");
    }
    if (!all_finite(direction)) throw Error(Errc::non_finite_input, name() + " restrict direction");
    restrictions_.fetch_add(1, std::memory_order_relaxed);
    return do_restrict(base, direction);
  }

  [[nodiscard]] OracleCounters counters() const noexcept {
    return {gradient_evals_.load(), value_evals_.load(), restrictions_.load(),
            probes_.load(),         forward_.load(),     adjoint_.load()};
  }

  void reset_counters() const noexcept {
    gradient_evals_ = 0;
    value_evals_ = 0;
    restrictions_ = 0;
    probes_ = 0;
    forward_ = 0;
    adjoint_ = 0;
  }

 protected:
  explicit Oracle(OracleSpec spec) : spec_(std::move(spec)) {}

  virtual GradientResult do_eval(const Vector& x) const = 0;
  virtual double do_value(const Vector& x) const { return do_eval(x).value; }
  virtual LineRestriction do_restrict(const Vector& base, const Vector& direction) const = 0;

  void count_probe() const noexcept { probes_.fetch_add(1, std::memory_order_relaxed); }
  void count_forward() const noexcept { forward_.fetch_add(1, std::memory_order_relaxed); }
  void count_adjoint() const noexcept { adjoint_.fetch_add(1, std::memory_order_relaxed); }

  OracleSpec spec_;

 private:
  void check_point(const Vector& x, const char* where) const {
    if (x.size() != spec_.dimension) {
      throw Error(Errc::dimension_mismatch, name() + " " + where + ": got " +
                                                std::to_string(x.size()) + ", want " +
                                                std::to_string(spec_.dimension));
    }
    if (!all_finite(x)) throw Error(Errc::non_finite_input, name() + " " + where);
  }

  mutable std::atomic<std::int64_t> gradient_evals_{0};
  mutable std::atomic<std::int64_t> value_evals_{0};
  mutable std::atomic<std::int64_t> restrictions_{0};
  mutable std::atomic<std::int64_t> probes_{0};
  mutable std::atomic<std::int64_t> forward_{0};
  mutable std::atomic<std::int64_t> adjoint_{0};
};

/// x - step * grad f(x). Use 1/beta for x+ and 1/alpha for x++.
inline Vector grad_step(const Oracle& oracle, const Vector& x, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(Errc::invalid_parameter, "grad_step needs a positive step");
  }
  return x - step * oracle.eval(x).gradient;
}

/// B(x++, |grad f(x)|²/alpha² (1 - 1/kappa)). Contains x*; the
/// -(2/alpha)(f(x+) - f*) term would only tighten it and is not observable.
inline Ball strong_convexity_ball(const Oracle& oracle, const Vector& x) {
  const auto& spec = oracle.spec();
  if (!spec.beta) {
    throw Error(Errc::precondition_violated, "strong_convexity_ball needs a known beta");
  }
  const GradientResult r = oracle.eval(x);
  const double kappa = *spec.beta / spec.alpha;
  return Ball(x - r.gradient / spec.alpha,
              r.gradient.squaredNorm() / (spec.alpha * spec.alpha) * (1.0 - 1.0 / kappa));
}

}  // namespace geod
