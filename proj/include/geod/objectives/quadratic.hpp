#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "geod/oracle.hpp"

namespace geod {

/// f(x) = 1/2 x^T Q x - b^T x with Q symmetric positive definite.
/// alpha and beta are the extreme eigenvalues of Q; x* = Q^{-1} b.
class QuadraticOracle final : public Oracle {
 public:
  /// Diagonal Q given by its diagonal.
  QuadraticOracle(const Vector& diagonal, Vector b) : Oracle(OracleSpec{}), b_(std::move(b)) {
    require_same_dimension(diagonal, b_, "quadratic_oracle");
    if (diagonal.size() == 0) throw Error(Errc::invalid_dimension, "quadratic_oracle: empty");
    if (!all_finite(diagonal) || !all_finite(b_)) {
      throw Error(Errc::non_finite_input, "quadratic_oracle");
    }
    if (diagonal.minCoeff() <= 0.0) {
      throw Error(Errc::not_positive_definite, "diagonal entry <= 0");
    }
    diag_ = diagonal;
    x_star_ = b_.cwiseQuotient(diagonal);
    finish(diagonal.minCoeff(), diagonal.maxCoeff());
  }

  /// Dense symmetric Q.
  QuadraticOracle(const Eigen::MatrixXd& q, Vector b) : Oracle(OracleSpec{}), b_(std::move(b)) {
    if (q.rows() != q.cols() || q.rows() != b_.size()) {
      throw Error(Errc::dimension_mismatch, "quadratic_oracle: Q is " + std::to_string(q.rows()) +
                                                "x" + std::to_string(q.cols()));
    }
    if (q.rows() == 0) throw Error(Errc::invalid_dimension, "quadratic_oracle: empty");
    if (!q.allFinite() || !all_finite(b_)) throw Error(Errc::non_finite_input, "quadratic_oracle");
    if ((q - q.transpose()).norm() > 1e-12 * (1.0 + q.norm())) {
      throw Error(Errc::invalid_parameter, "quadratic_oracle: Q not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) throw Error(Errc::not_positive_definite, "smallest eigenvalue <= 0");
    dense_ = q;
    x_star_ = q.llt().solve(b_);
    finish(lo, hi);
  }

  [[nodiscard]] std::string name() const override { return "quadratic"; }
  [[nodiscard]] std::optional<Vector> minimizer() const override { return x_star_; }

  [[nodiscard]] Vector apply(const Vector& v) const {
    if (dense_) return *dense_ * v;
    return diag_.cwiseProduct(v);
  }

 protected:
  GradientResult do_eval(const Vector& x) const override {
    const Vector qx = apply(x);
    return {0.5 * x.dot(qx) - b_.dot(x), qx - b_};
  }

  LineRestriction do_restrict(const Vector& base, const Vector& direction) const override {
    const Vector q_base = apply(base);
    const double f0 = 0.5 * base.dot(q_base) - b_.dot(base);
    const double slope = (q_base - b_).dot(direction);
    const double curvature = direction.dot(apply(direction));
    auto eval = [this, f0, slope, curvature](double t) {
      count_probe();
      return LinePoint{f0 + t * slope + 0.5 * t * t * curvature, slope + t * curvature};
    };
    return {base, direction, std::move(eval)};
  }

 private:
  void finish(double lo, double hi) {
    spec_.dimension = b_.size();
    spec_.alpha = lo;
    spec_.beta = hi;
    spec_.f_star = -0.5 * b_.dot(x_star_);
  }

  Vector b_;
  Vector diag_;
  std::optional<Eigen::MatrixXd> dense_;
  Vector x_star_;
};

inline std::unique_ptr<QuadraticOracle> quadratic_oracle(const Eigen::MatrixXd& q, Vector b) {
  return std::make_unique<QuadraticOracle>(q, std::move(b));
}

inline std::unique_ptr<QuadraticOracle> diagonal_quadratic_oracle(const Vector& diagonal,
                                                                  Vector b) {
  return std::make_unique<QuadraticOracle>(diagonal, std::move(b));
}

}  // namespace geod
