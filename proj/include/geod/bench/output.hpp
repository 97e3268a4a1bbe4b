#pragma once

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "geod/bench/report.hpp"
#include "geod/bench/svg.hpp"

namespace geod::bench {

namespace detail {

inline std::string csv_real(double v) { return fmt::format("{}", v); }

inline std::string csv_opt(const std::optional<double>& v) { return v ? csv_real(*v) : ""; }

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(Errc::io_error, "cannot create " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw Error(Errc::io_error, "write failure on " + path.string());
}

/// File-name-safe form of a label.
inline std::string slug(const std::string& s) {
  std::string out;
  for (const char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.' || c == '=';
    out += keep ? c : '_';
  }
  return out;
}

}  // namespace detail

/// Columns: k, value, gap (value - f*, empty without f*), grad_norm,
/// radius_sq (empty for non-geometric methods), then the cumulative
/// gradient_calls, value_calls, line_searches and ls_probes.
inline std::string trace_csv(const IterationTrace& trace,
                             std::optional<double> f_star = std::nullopt) {
  std::string out =
      "k,value,gap,grad_norm,radius_sq,gradient_calls,value_calls,line_searches,ls_probes\n";
  for (const IterationRecord& r : trace.records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.k, detail::csv_real(r.value),
                       f_star ? detail::csv_real(r.value - *f_star) : "",
                       detail::csv_real(r.grad_norm), detail::csv_opt(r.radius_sq),
                       r.gradient_calls, r.value_calls, r.line_searches, r.ls_probes);
  }
  return out;
}

/// One row per (run, epsilon). `iterations` is the first k within
/// epsilon (1 + |f*|) of the reference, or the literal token `censored`.
inline std::string runs_csv(const BenchReport& report) {
  std::string out = "problem,param_name,param,method,kappa_hint,f_star,f_star_source,epsilon,iterations\n";
  for (const RunResult& r : report.runs) {
    if (!r.ok()) continue;
    const ProblemSummary& p = report.problems[r.problem];
    for (const AccuracyHit& h : r.hits) {
      out += fmt::format("{},{},{},{},{},{},{},{},{}\n", p.name, p.param_name,
                         detail::csv_real(p.param), to_string(r.method),
                         detail::csv_opt(r.kappa_hint), detail::csv_real(p.f_star),
                         p.f_star_source, detail::csv_real(h.epsilon),
                         h.k ? std::to_string(*h.k) : std::string("censored"));
    }
  }
  return out;
}

/// Per (method, epsilon): median and 90th percentile of iterations over
/// problems. The `percentile_method` column names the rule: linear
/// interpolation between order statistics, censored runs as +infinity.
inline std::string aggregate_csv(const BenchReport& report) {
  std::string out = "method,epsilon,percentile_method,median,p90,reached,runs\n";
  auto cell = [](const std::optional<double>& v) {
    return v ? detail::csv_real(*v) : std::string("censored");
  };
  for (const AggregateRow& row : report.aggregate) {
    out += fmt::format("{},{},linear,{},{},{},{}\n", to_string(row.method),
                       detail::csv_real(row.epsilon), cell(row.median), cell(row.p90),
                       row.reached, row.runs);
  }
  return out;
}

inline Plot accuracy_plot(const BenchReport& report, bool p90) {
  Plot plot;
  plot.title = p90 ? "90th percentile of iterations to accuracy" : "Median iterations to accuracy";
  plot.x_label = "accuracy epsilon";
  plot.y_label = "iterations";
  plot.log_x = true;
  for (const Method m : report.config.methods) {
    Plot::Series s{std::string(to_string(m)), {}};
    for (const AggregateRow& row : report.aggregate) {
      if (row.method != m) continue;
      const auto& v = p90 ? row.p90 : row.median;
      s.points.emplace_back(row.epsilon, v ? *v : std::nan(""));
    }
    if (!s.points.empty()) plot.series.push_back(std::move(s));
  }
  return plot;
}

/// f - f* against iteration for every method on one problem. Gaps below
/// 1e-16 (1 + |f*|) are drawn at that floor.
inline Plot convergence_plot(const BenchReport& report, std::size_t problem) {
  const ProblemSummary& p = report.problems[problem];
  Plot plot;
  plot.title = fmt::format("{} {}={}", p.name, p.param_name, p.param);
  plot.x_label = "iteration";
  plot.y_label = "f - f*";
  plot.log_y = true;
  const double floor = 1e-16 * (1.0 + std::abs(p.f_star));
  for (const RunResult& r : report.runs) {
    if (r.problem != problem || !r.ok()) continue;
    Plot::Series s{std::string(to_string(r.method)), {}};
    for (const IterationRecord& rec : r.trace.records) {
      s.points.emplace_back(rec.k, std::max(rec.value - p.f_star, floor));
    }
    plot.series.push_back(std::move(s));
  }
  return plot;
}

inline void emit_csv(const IterationTrace& trace, const std::string& path,
                     std::optional<double> f_star = std::nullopt) {
  detail::write_file(path, trace_csv(trace, f_star));
}

inline void emit_svg(const IterationTrace& trace, const std::string& path,
                     std::optional<double> f_star = std::nullopt) {
  Plot plot;
  plot.title = trace.method;
  plot.x_label = "iteration";
  plot.log_y = true;
  Plot::Series s{trace.method, {}};
  if (f_star) {
    plot.y_label = "f - f*";
    const double floor = 1e-16 * (1.0 + std::abs(*f_star));
    for (const IterationRecord& r : trace.records) {
      s.points.emplace_back(r.k, std::max(r.value - *f_star, floor));
    }
  } else {
    plot.y_label = "gradient norm";
    for (const IterationRecord& r : trace.records) s.points.emplace_back(r.k, r.grad_norm);
  }
  plot.series.push_back(std::move(s));
  detail::write_file(path, render_svg(plot));
}

/// Writes report.csv (aggregate), runs.csv, median/p90 SVG plots, one
/// convergence SVG per problem and, when enabled, one trace CSV per run.
inline void emit_csv(const BenchReport& report, const std::string& dir) {
  const std::filesystem::path root(dir);
  detail::write_file(root / "report.csv", aggregate_csv(report));
  detail::write_file(root / "runs.csv", runs_csv(report));
  if (report.incomplete()) {
    std::string text;
    for (const std::string& e : report.errors) text += e + "\n";
    detail::write_file(root / "errors.txt", text);
  }
  if (!report.config.write_traces) return;
  for (const RunResult& r : report.runs) {
    if (!r.ok()) continue;
    const ProblemSummary& p = report.problems[r.problem];
    const std::string name = detail::slug(fmt::format("{}_{}={}_{}", p.name, p.param_name,
                                                      p.param, to_string(r.method)));
    detail::write_file(root / "traces" / (name + ".csv"), trace_csv(r.trace, p.f_star));
  }
}

inline void emit_svg(const BenchReport& report, const std::string& dir) {
  const std::filesystem::path root(dir);
  detail::write_file(root / "accuracy_median.svg", render_svg(accuracy_plot(report, false)));
  detail::write_file(root / "accuracy_p90.svg", render_svg(accuracy_plot(report, true)));
  for (std::size_t i = 0; i < report.problems.size(); ++i) {
    const ProblemSummary& p = report.problems[i];
    const std::string name = detail::slug(fmt::format("{}_{}={}", p.name, p.param_name, p.param));
    detail::write_file(root / "convergence" / (name + ".svg"),
                       render_svg(convergence_plot(report, i)));
  }
}

}  // namespace geod::bench
