#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "geod/oracle.hpp"

namespace geod {

/// The chain quadratic that is hard for every gradient-span method:
///
///   f(x) = beta/2 ((1 - x_1)² + sum_i (x_i - x_{i+1})² + x_n²) + 1/2 |x|²
///
/// Gradient beta (L x - e_1) + x, with L the tridiagonal (-1, 2, -1) chain
/// operator, applied matrix-free. alpha = 1 and the smoothness constant is
/// 1 + beta * 2 (1 + cos(pi / (n + 1))).
class WorstCaseOracle final : public Oracle {
 public:
  WorstCaseOracle(Index n, double beta) : Oracle(OracleSpec{}), beta_(beta) {
    if (n < 2) throw Error(Errc::invalid_dimension, "worst_case_oracle needs n >= 2");
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw Error(Errc::invalid_parameter, "worst_case_oracle needs beta > 0");
    }
    const double lambda_max = 2.0 * (1.0 + std::cos(std::numbers::pi / static_cast<double>(n + 1)));
    spec_.dimension = n;
    spec_.alpha = 1.0;
    spec_.beta = 1.0 + beta * lambda_max;
    x_star_ = solve_optimum(n, beta);
    spec_.f_star = value_of(x_star_);
  }

  [[nodiscard]] std::string name() const override { return "worst_case"; }
  [[nodiscard]] std::optional<Vector> minimizer() const override { return x_star_; }
  [[nodiscard]] double chain_beta() const noexcept { return beta_; }

  /// (beta L + I) v.
  [[nodiscard]] Vector hessian_apply(const Vector& v) const {
    const Index n = v.size();
    Vector out(n);
    for (Index i = 0; i < n; ++i) {
      double lv = 2.0 * v[i];
      if (i > 0) lv -= v[i - 1];
      if (i + 1 < n) lv -= v[i + 1];
      out[i] = beta_ * lv + v[i];
    }
    return out;
  }

 protected:
  GradientResult do_eval(const Vector& x) const override {
    Vector g = hessian_apply(x);
    g[0] -= beta_;
    return {value_of(x), std::move(g)};
  }

  double do_value(const Vector& x) const override { return value_of(x); }

  LineRestriction do_restrict(const Vector& base, const Vector& direction) const override {
    Vector g = hessian_apply(base);
    g[0] -= beta_;
    const double f0 = value_of(base);
    const double slope = g.dot(direction);
    const double curvature = direction.dot(hessian_apply(direction));
    auto eval = [this, f0, slope, curvature](double t) {
      count_probe();
      return LinePoint{f0 + t * slope + 0.5 * t * t * curvature, slope + t * curvature};
    };
    return {base, direction, std::move(eval)};
  }

 private:
  [[nodiscard]] double value_of(const Vector& x) const {
    const Index n = x.size();
    double chain = (1.0 - x[0]) * (1.0 - x[0]) + x[n - 1] * x[n - 1];
    for (Index i = 0; i + 1 < n; ++i) {
      const double d = x[i] - x[i + 1];
      chain += d * d;
    }
    return 0.5 * beta_ * chain + 0.5 * x.squaredNorm();
  }

  // Thomas algorithm on (beta L + I) x = beta e_1.
  static Vector solve_optimum(Index n, double beta) {
    const double diag = 2.0 * beta + 1.0;
    const double off = -beta;
    std::vector<double> c_prime(static_cast<std::size_t>(n));
    Vector d_prime(n);
    c_prime[0] = off / diag;
    d_prime[0] = beta / diag;
    for (Index i = 1; i < n; ++i) {
      const double denom = diag - off * c_prime[static_cast<std::size_t>(i - 1)];
      c_prime[static_cast<std::size_t>(i)] = off / denom;
      d_prime[i] = (0.0 - off * d_prime[i - 1]) / denom;
    }
    Vector x(n);
    x[n - 1] = d_prime[n - 1];
    for (Index i = n - 2; i >= 0; --i) {
      x[i] = d_prime[i] - c_prime[static_cast<std::size_t>(i)] * x[i + 1];
    }
    return x;
  }

  double beta_;
  Vector x_star_;
};

inline std::unique_ptr<WorstCaseOracle> worst_case_oracle(Index n, double beta) {
  return std::make_unique<WorstCaseOracle>(n, beta);
}

}  // namespace geod
