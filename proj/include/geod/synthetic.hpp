#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "geod/dataset.hpp"

namespace geod {

/// Random sparse binary classification data: a hidden unit direction w,
/// features present with probability `density` and N(0,1) values, and
/// labels sign(separation * a^T w + N(0,1)). Large `separation` gives an
/// (almost) linearly separable set. Every row keeps at least one feature.
inline SparseDataset synthetic_classification(std::size_t n_samples, std::size_t n_features,
                                              double separation, double density,
                                              std::uint64_t seed) {
  if (n_samples < 1 || n_features < 1) {
    throw Error(Errc::invalid_parameter, "synthetic_classification needs samples, features >= 1");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw Error(Errc::invalid_parameter, "density must lie in (0, 1]");
  }
  if (!std::isfinite(separation) || separation < 0.0) {
    throw Error(Errc::invalid_parameter, "separation must be finite and >= 0");
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n_features - 1);

  std::vector<double> w(n_features);
  double w_norm = 0.0;
  for (double& wi : w) {
    wi = normal(rng);
    w_norm += wi * wi;
  }
  w_norm = std::sqrt(w_norm);
  if (w_norm == 0.0) w_norm = 1.0;

  DatasetBuilder builder;
  std::vector<Feature> row;
  for (std::size_t i = 0; i < n_samples; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n_features; ++j) {
      if (density >= 1.0 || unit(rng) < density) {
        row.push_back({static_cast<std::uint32_t>(j + 1), normal(rng)});
      }
    }
    if (row.empty()) {
      row.push_back({static_cast<std::uint32_t>(pick(rng) + 1), normal(rng)});
    }
    double margin = 0.0;
    for (const Feature& f : row) margin += f.value * w[f.index - 1] / w_norm;
    const double score = separation * margin + normal(rng);
    builder.add_row(score >= 0.0 ? 1.0 : -1.0, row);
  }
  return std::move(builder).build(n_features);
}

}  // namespace geod
