#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geod/error.hpp"
#include "geod/optimizers/trace.hpp"

namespace geod::bench {

/// Default accuracy grid: 1e-2, 1e-3, ..., 1e-10.
inline std::vector<double> default_epsilons() {
  std::vector<double> eps;
  for (int e = 2; e <= 10; ++e) eps.push_back(std::pow(10.0, -e));
  return eps;
}

/// First iteration reaching f - f* <= epsilon (1 + |f*|); nullopt is censored.
struct AccuracyHit {
  double epsilon = 0.0;
  std::optional<int> k;
};

inline double accuracy_threshold(double f_star, double epsilon) {
  return epsilon * (1.0 + std::abs(f_star));
}

/// Slack allowed between a reference value and the lowest traced value.
inline double reference_tolerance(double f_star) { return 1e-12 * (1.0 + std::abs(f_star)); }

inline void validate_epsilons(std::span<const double> epsilons) {
  if (epsilons.empty()) throw Error(Errc::invalid_parameter, "epsilon list is empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !std::isfinite(epsilons[i])) {
      throw Error(Errc::invalid_parameter, "epsilons must be positive and finite");
    }
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
      throw Error(Errc::invalid_parameter, "epsilons must be strictly decreasing");
    }
  }
}

inline std::vector<AccuracyHit> iterations_to_accuracy(const IterationTrace& trace, double f_star,
                                                       std::span<const double> epsilons) {
  validate_epsilons(epsilons);
  if (trace.records.empty()) throw Error(Errc::invalid_parameter, "empty trace");
  double lowest = std::numeric_limits<double>::infinity();
  for (const IterationRecord& r : trace.records) lowest = std::min(lowest, r.value);
  if (f_star > lowest + reference_tolerance(f_star)) {
    throw Error(Errc::bad_reference, "reference f* exceeds the trace minimum by " +
                                         std::to_string(f_star - lowest));
  }

  std::vector<AccuracyHit> hits;
  hits.reserve(epsilons.size());
  for (const double eps : epsilons) {
    const double threshold = accuracy_threshold(f_star, eps);
    AccuracyHit hit{eps, std::nullopt};
    for (std::size_t j = 0; j < trace.records.size(); ++j) {
      if (trace.records[j].value - f_star <= threshold) {
        hit.k = trace.records[j].k;
        break;
      }
    }
    hits.push_back(hit);
  }
  return hits;
}

/// q-quantile with linear interpolation between order statistics:
/// h = (N - 1) q, result = v[floor h] + (h - floor h)(v[floor h + 1] - v[floor h]).
/// Censored entries sort as +infinity; a result that touches one is censored.
inline std::optional<double> percentile(std::span<const std::optional<double>> values, double q) {
  if (values.empty()) throw Error(Errc::empty_results, "no results to aggregate");
  if (!(q > 0.0 && q < 1.0)) throw Error(Errc::invalid_parameter, "quantile must lie in (0, 1)");
  std::vector<double> sorted;
  sorted.reserve(values.size());
  for (const auto& v : values) sorted.push_back(v.value_or(std::numeric_limits<double>::infinity()));
  std::sort(sorted.begin(), sorted.end());

  const double h = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  const double a = sorted[lo];
  if (frac == 0.0) return std::isfinite(a) ? std::optional<double>(a) : std::nullopt;
  const double b = sorted[lo + 1];
  if (!std::isfinite(a) || !std::isfinite(b)) return std::nullopt;
  return a + frac * (b - a);
}

}  // namespace geod::bench
