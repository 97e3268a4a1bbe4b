#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geod/bench/accuracy.hpp"
#include "geod/bench/config.hpp"
#include "geod/optimizers/methods.hpp"

namespace geod::bench {

struct ProblemSummary {
  std::string name;
  std::string param_name;
  double param = 0.0;
  double f_star = 0.0;
  std::string f_star_source;  // "closed_form" or "reference_run"
};

/// One method on one problem. `kappa_hint` is set for the AFG baselines
/// (the tuned value when tuning is on).
struct RunResult {
  std::size_t problem = 0;
  Method method = Method::geod;
  std::optional<double> kappa_hint;
  IterationTrace trace;
  std::vector<AccuracyHit> hits;
  std::optional<std::string> error;

  [[nodiscard]] bool ok() const noexcept { return !error.has_value(); }
};

struct AggregateRow {
  Method method = Method::geod;
  double epsilon = 0.0;
  std::optional<double> median;
  std::optional<double> p90;
  int reached = 0;
  int runs = 0;
};

struct BenchReport {
  RunConfig config;
  std::vector<ProblemSummary> problems;
  std::vector<RunResult> runs;
  std::vector<AggregateRow> aggregate;
  std::vector<std::string> errors;

  [[nodiscard]] bool incomplete() const noexcept { return !errors.empty(); }
};

struct MethodStatistic {
  Method method = Method::geod;
  double epsilon = 0.0;
  std::optional<double> value;
};

/// q-quantile of iterations-to-epsilon across problems, per (method, epsilon),
/// using `percentile` (linear interpolation, censored as +infinity). Failed
/// runs are skipped; methods and epsilons keep first-seen order.
inline std::vector<MethodStatistic> aggregate_percentiles(std::span<const RunResult> results,
                                                           double q) {
  std::vector<Method> methods;
  std::vector<double> epsilons;
  for (const RunResult& r : results) {
    if (!r.ok()) continue;
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    for (const AccuracyHit& h : r.hits) {
      if (std::find(epsilons.begin(), epsilons.end(), h.epsilon) == epsilons.end()) {
        epsilons.push_back(h.epsilon);
      }
    }
  }
  if (methods.empty()) throw Error(Errc::empty_results, "no completed runs to aggregate");

  std::vector<MethodStatistic> out;
  for (const Method m : methods) {
    for (const double eps : epsilons) {
      std::vector<std::optional<double>> values;
      for (const RunResult& r : results) {
        if (!r.ok() || r.method != m) continue;
        for (const AccuracyHit& h : r.hits) {
          if (h.epsilon != eps) continue;
          values.push_back(h.k ? std::optional<double>(*h.k) : std::nullopt);
        }
      }
      if (values.empty()) continue;
      out.push_back({m, eps, percentile(values, q)});
    }
  }
  return out;
}

inline std::vector<AggregateRow> aggregate_rows(std::span<const RunResult> results) {
  const auto medians = aggregate_percentiles(results, 0.5);
  const auto p90s = aggregate_percentiles(results, 0.9);
  std::vector<AggregateRow> rows;
  for (std::size_t i = 0; i < medians.size(); ++i) {
    AggregateRow row;
    row.method = medians[i].method;
    row.epsilon = medians[i].epsilon;
    row.median = medians[i].value;
    row.p90 = p90s[i].value;
    for (const RunResult& r : results) {
      if (!r.ok() || r.method != row.method) continue;
      for (const AccuracyHit& h : r.hits) {
        if (h.epsilon != row.epsilon) continue;
        ++row.runs;
        if (h.k) ++row.reached;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace geod::bench
