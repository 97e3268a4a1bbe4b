#pragma once

#include <Eigen/SparseCore>

#include <cmath>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "geod/dataset.hpp"
#include "geod/oracle.hpp"

namespace geod {

/// phi(z) = 0 for z >= 1, 1/2 - z for z <= 0, (1 - z)²/2 in between.
inline double smoothed_hinge(double z) noexcept {
  if (z >= 1.0) return 0.0;
  if (z <= 0.0) return 0.5 - z;
  return 0.5 * (1.0 - z) * (1.0 - z);
}

inline double smoothed_hinge_derivative(double z) noexcept {
  if (z >= 1.0) return 0.0;
  if (z <= 0.0) return -1.0;
  return z - 1.0;
}

/// Regularized empirical risk
///   f(x) = (1/n) sum_i phi(b_i a_i^T x) + (lambda/2) |x|²
/// over a sparse dataset. alpha = lambda; beta is left unknown (see
/// estimate_beta). Every line restriction computes the two margin vectors
/// M base and M direction once, so each probe afterwards costs one pass
/// over the samples and no matrix-vector products.
class SmoothedHingeErmOracle final : public Oracle {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  SmoothedHingeErmOracle(const SparseDataset& data, double lambda)
      : Oracle(OracleSpec{}), lambda_(lambda) {
    if (data.n_samples() == 0) throw Error(Errc::empty_dataset, "smoothed_hinge_erm_oracle");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw Error(Errc::non_positive_lambda, "lambda = " + std::to_string(lambda));
    }
    const auto n = static_cast<Index>(data.n_samples());
    const auto d = static_cast<Index>(data.n_features());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(data.nnz());
    for (std::size_t i = 0; i < data.n_samples(); ++i) {
      const double b = data.label(i);
      for (const Feature& f : data.row(i)) {
        triplets.emplace_back(static_cast<Index>(i), static_cast<Index>(f.index) - 1, b * f.value);
      }
    }
    margins_.resize(n, d);
    margins_.setFromTriplets(triplets.begin(), triplets.end());
    margins_.makeCompressed();
    inv_n_ = 1.0 / static_cast<double>(n);
    spec_.dimension = d;
    spec_.alpha = lambda;
  }

  [[nodiscard]] std::string name() const override { return "smoothed_hinge_erm"; }
  [[nodiscard]] double lambda() const noexcept { return lambda_; }
  [[nodiscard]] Index n_samples() const noexcept { return margins_.rows(); }

  /// lambda + sigma_max(A)² / n, with sigma_max from power iteration on
  /// A^T A started at the all-ones vector. Does not touch the counters.
  [[nodiscard]] double estimate_beta(int iterations = 100) const {
    Vector v = Vector::Ones(margins_.cols()).normalized();
    double sigma_sq = 0.0;
    for (int it = 0; it < iterations; ++it) {
      const Vector w = margins_.transpose() * (margins_ * v);
      const double norm = w.norm();
      if (norm == 0.0) break;
      sigma_sq = v.dot(w);
      v = w / norm;
    }
    return lambda_ + inv_n_ * sigma_sq;
  }

  /// The data term alone, (1/n) sum_i phi(b_i a_i^T x).
  [[nodiscard]] double loss(const Vector& x) const {
    const Vector z = margins_ * x;
    double total = 0.0;
    for (Index i = 0; i < z.size(); ++i) total += smoothed_hinge(z[i]);
    return inv_n_ * total;
  }

 protected:
  GradientResult do_eval(const Vector& x) const override {
    count_forward();
    const Vector z = margins_ * x;
    Vector weights(z.size());
    double total = 0.0;
    for (Index i = 0; i < z.size(); ++i) {
      total += smoothed_hinge(z[i]);
      weights[i] = inv_n_ * smoothed_hinge_derivative(z[i]);
    }
    count_adjoint();
    Vector g = margins_.transpose() * weights;
    g += lambda_ * x;
    return {inv_n_ * total + 0.5 * lambda_ * x.squaredNorm(), std::move(g)};
  }

  double do_value(const Vector& x) const override {
    count_forward();
    return loss(x) + 0.5 * lambda_ * x.squaredNorm();
  }

  LineRestriction do_restrict(const Vector& base, const Vector& direction) const override {
    struct Cache {
      Vector z0;
      Vector zd;
      double bb, bd, dd;
    };
    count_forward();
    count_forward();
    auto cache = std::make_shared<Cache>(Cache{margins_ * base, margins_ * direction,
                                               base.squaredNorm(), base.dot(direction),
                                               direction.squaredNorm()});
    auto eval = [this, cache](double t) {
      count_probe();
      const Cache& c = *cache;
      double value = 0.0;
      double slope = 0.0;
      for (Index i = 0; i < c.z0.size(); ++i) {
        const double z = c.z0[i] + t * c.zd[i];
        value += smoothed_hinge(z);
        slope += smoothed_hinge_derivative(z) * c.zd[i];
      }
      value = inv_n_ * value + 0.5 * lambda_ * (c.bb + 2.0 * t * c.bd + t * t * c.dd);
      slope = inv_n_ * slope + lambda_ * (c.bd + t * c.dd);
      return LinePoint{value, slope};
    };
    return {base, direction, std::move(eval)};
  }

 private:
  double lambda_;
  double inv_n_ = 1.0;
  Matrix margins_;  // rows b_i a_i^T
};

inline std::unique_ptr<SmoothedHingeErmOracle> smoothed_hinge_erm_oracle(const SparseDataset& data,
                                                                         double lambda) {
  return std::make_unique<SmoothedHingeErmOracle>(data, lambda);
}

}  // namespace geod
