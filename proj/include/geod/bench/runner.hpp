#pragma once

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "geod/bench/accuracy.hpp"
#include "geod/bench/config.hpp"
#include "geod/bench/output.hpp"
#include "geod/bench/problems.hpp"
#include "geod/bench/report.hpp"
#include "geod/optimizers/methods.hpp"

namespace geod::bench {

/// Runs fn(0) ... fn(count - 1) on a bounded pool. fn must not throw.
/// workers == 0 uses the hardware concurrency.
template <class F>
void parallel_for(std::size_t count, int workers, F&& fn) {
  std::size_t pool = workers > 0 ? static_cast<std::size_t>(workers)
                                 : std::max(1u, std::thread::hardware_concurrency());
  pool = std::min(pool, count);
  if (pool <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> threads;
  threads.reserve(pool);
  for (std::size_t t = 0; t < pool; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
}

/// Distinct momentum hints of the tuning grid: the strong-convexity estimate
/// beta_hat 2^j gives kappa_hint = max(1, 2^-j).
inline std::vector<double> tuning_grid(const RunConfig& cfg) {
  std::vector<double> hints;
  for (int j = cfg.tune_min_exp; j <= cfg.tune_max_exp; ++j) {
    const double hint = std::max(1.0, std::ldexp(1.0, -j));
    if (std::find(hints.begin(), hints.end(), hint) == hints.end()) hints.push_back(hint);
  }
  return hints;
}

namespace detail {

struct Outcome {
  std::optional<IterationTrace> trace;
  std::optional<std::string> error;
};

inline std::string context(const ProblemInstance& p, std::string_view what) {
  return fmt::format("problem {}, {}", p.label(), what);
}

inline Outcome run_one(const ProblemInstance& p, Method method, const RunConfig& cfg,
                       std::optional<double> kappa_hint, bool keep_iterates) {
  Outcome out;
  try {
    StoppingRule stop;
    stop.max_iters = cfg.max_iters;
    stop.grad_tol = cfg.grad_tol;
    MethodParams params;
    params.alpha = cfg.alpha;
    if (kappa_hint) params.accelerated.kappa_hint = *kappa_hint;
    params.accelerated.beta = p.beta_hat;
    RunOptions opts;
    opts.keep_iterates = keep_iterates;
    out.trace = run_method(method, *p.oracle, p.x0, stop, params, opts);
  } catch (const std::exception& e) {
    out.error = context(p, fmt::format("method {}: {}", to_string(method), e.what()));
  }
  return out;
}

/// Smaller is better: iterations at each epsilon from the tightest one up,
/// censored as INT_MAX.
inline std::vector<int> tuning_score(const IterationTrace& trace, double f_ref,
                                     std::span<const double> epsilons) {
  std::vector<int> score;
  const double lowest = std::min_element(trace.records.begin(), trace.records.end(),
                                         [](const auto& a, const auto& b) {
                                           return a.value < b.value;
                                         })->value;
  const double ref = std::min(f_ref, lowest);
  const auto hits = iterations_to_accuracy(trace, ref, epsilons);
  for (auto it = hits.rbegin(); it != hits.rend(); ++it) score.push_back(it->k.value_or(INT_MAX));
  return score;
}

/// Moves each hit to the first record whose iterate, re-evaluated through
/// the oracle, is within the threshold.
inline void verify_hits(const ProblemInstance& p, double f_star, RunResult& r) {
  const IterationTrace& t = r.trace;
  for (AccuracyHit& h : r.hits) {
    if (!h.k) continue;
    const double threshold = accuracy_threshold(f_star, h.epsilon);
    std::optional<int> verified;
    for (std::size_t j = static_cast<std::size_t>(*h.k); j < t.records.size(); ++j) {
      if (t.records[j].value - f_star > threshold) continue;
      if (p.oracle->value(t.iterates.at(j)) - f_star <= threshold) {
        verified = t.records[j].k;
        break;
      }
    }
    h.k = verified;
  }
}

}  // namespace detail

/// Runs the sweep described by `cfg`: builds the problems, computes f*
/// references for problems without a closed form (a GeoD run
/// reference_factor times longer with reference_grad_tol, then the minimum
/// over every run), tunes the AFG baselines over the power-of-two grid,
/// runs every method and aggregates. Errors are recorded per run with
/// their context and mark the report incomplete. Writes the report into
/// cfg.out_dir unless it is empty.
inline BenchReport run_bench(const RunConfig& cfg) {
  cfg.validate();
  BenchReport report;
  report.config = cfg;
  const std::vector<ProblemInstance> problems = build_problems(cfg);
  const std::size_t np = problems.size();

  // Reference values.
  std::vector<double> f_ref(np, std::numeric_limits<double>::infinity());
  std::vector<std::optional<std::string>> ref_error(np);
  std::vector<std::size_t> need_ref;
  for (std::size_t i = 0; i < np; ++i) {
    if (problems[i].f_star) {
      f_ref[i] = *problems[i].f_star;
    } else {
      need_ref.push_back(i);
    }
  }
  parallel_for(need_ref.size(), cfg.workers, [&](std::size_t t) {
    const std::size_t i = need_ref[t];
    try {
      StoppingRule stop;
      stop.max_iters = cfg.max_iters * cfg.reference_factor;
      stop.grad_tol = cfg.reference_grad_tol;
      const IterationTrace trace =
          run_geod(*problems[i].oracle, problems[i].x0, stop, {}, GeometricOptions{cfg.alpha});
      for (const IterationRecord& r : trace.records) f_ref[i] = std::min(f_ref[i], r.value);
    } catch (const std::exception& e) {
      ref_error[i] = detail::context(problems[i], fmt::format("reference run: {}", e.what()));
    }
  });

  // Tuning runs for the accelerated baselines.
  struct TuneTask {
    std::size_t problem;
    Method method;
    double hint;
  };
  const std::vector<double> grid = tuning_grid(cfg);
  std::vector<TuneTask> tune_tasks;
  if (cfg.tune) {
    for (std::size_t i = 0; i < np; ++i) {
      if (ref_error[i]) continue;
      for (const Method m : cfg.methods) {
        if (!is_accelerated(m)) continue;
        for (const double h : grid) tune_tasks.push_back({i, m, h});
      }
    }
  }
  std::vector<std::optional<std::vector<int>>> tune_scores(tune_tasks.size());
  std::vector<double> tune_min(tune_tasks.size(), std::numeric_limits<double>::infinity());
  parallel_for(tune_tasks.size(), cfg.workers, [&](std::size_t t) {
    const TuneTask& task = tune_tasks[t];
    const detail::Outcome o = detail::run_one(problems[task.problem], task.method, cfg, task.hint,
                                              false);
    if (!o.trace) return;
    try {
      tune_scores[t] = detail::tuning_score(*o.trace, f_ref[task.problem], cfg.epsilons);
      for (const IterationRecord& r : o.trace->records) tune_min[t] = std::min(tune_min[t], r.value);
    } catch (const std::exception&) {
    }
  });

  // Final runs, one per (problem, method), with iterates kept for checking.
  const std::size_t nm = cfg.methods.size();
  report.runs.resize(np * nm);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t j = 0; j < nm; ++j) {
      RunResult& r = report.runs[i * nm + j];
      r.problem = i;
      r.method = cfg.methods[j];
      if (!is_accelerated(r.method)) continue;
      if (!cfg.tune) {
        r.kappa_hint = cfg.kappa_hint >= 1.0
                           ? cfg.kappa_hint
                           : std::max(1.0, problems[i].beta_hat / problems[i].oracle->spec().alpha);
        continue;
      }
      const std::vector<int>* best = nullptr;
      for (std::size_t t = 0; t < tune_tasks.size(); ++t) {
        if (tune_tasks[t].problem != i || tune_tasks[t].method != r.method || !tune_scores[t]) {
          continue;
        }
        if (!best || *tune_scores[t] < *best) {
          best = &*tune_scores[t];
          r.kappa_hint = tune_tasks[t].hint;
        }
      }
    }
  }
  parallel_for(report.runs.size(), cfg.workers, [&](std::size_t t) {
    RunResult& r = report.runs[t];
    const ProblemInstance& p = problems[r.problem];
    if (ref_error[r.problem]) {
      r.error = *ref_error[r.problem];
      return;
    }
    if (is_accelerated(r.method) && !r.kappa_hint) {
      r.error = detail::context(p, fmt::format("method {}: every tuning run failed",
                                               to_string(r.method)));
      return;
    }
    detail::Outcome o = detail::run_one(p, r.method, cfg, r.kappa_hint, true);
    if (o.error) {
      r.error = std::move(o.error);
      return;
    }
    r.trace = std::move(*o.trace);
  });

  // f* per problem, then accuracy hits checked against re-evaluated iterates.
  for (std::size_t i = 0; i < np; ++i) {
    const ProblemInstance& p = problems[i];
    ProblemSummary s{p.name, p.param_name, p.param, f_ref[i],
                     p.f_star ? "closed_form" : "reference_run"};
    if (!p.f_star) {
      for (std::size_t t = 0; t < tune_tasks.size(); ++t) {
        if (tune_tasks[t].problem == i) s.f_star = std::min(s.f_star, tune_min[t]);
      }
      for (std::size_t j = 0; j < nm; ++j) {
        const RunResult& r = report.runs[i * nm + j];
        if (!r.ok()) continue;
        for (const IterationRecord& rec : r.trace.records) s.f_star = std::min(s.f_star, rec.value);
      }
    }
    report.problems.push_back(s);
  }
  for (RunResult& r : report.runs) {
    if (r.ok()) {
      const ProblemInstance& p = problems[r.problem];
      const double f_star = report.problems[r.problem].f_star;
      try {
        r.hits = iterations_to_accuracy(r.trace, f_star, cfg.epsilons);
        detail::verify_hits(p, f_star, r);
      } catch (const std::exception& e) {
        r.error = detail::context(p, fmt::format("method {}: {}", to_string(r.method), e.what()));
      }
    }
    r.trace.iterates.clear();
    r.trace.iterates.shrink_to_fit();
    if (r.error) report.errors.push_back(*r.error);
  }

  try {
    report.aggregate = aggregate_rows(report.runs);
  } catch (const Error& e) {
    report.errors.push_back(e.what());
  }
  if (!cfg.out_dir.empty()) {
    emit_csv(report, cfg.out_dir);
    if (cfg.write_plots) emit_svg(report, cfg.out_dir);
  }
  return report;
}

}  // namespace geod::bench
