// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "geod/bench.hpp"
#include "geod/geod.hpp"
#include "geod/verify.hpp"
#include "test_support.hpp"

#ifndef GEOD_CLI_PATH
#define GEOD_CLI_PATH ""
#endif

namespace {

using namespace geod;

struct Outcome {
  bool passed = true;
  std::string detail;
};

class Suite {
 public:
  void run(int id, const std::string& name, double limit_s, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit_s > 0.0 && secs >= limit_s) {
      o.passed = false;
      o.detail += fmt::format("; over the {:g} s limit", limit_s);
    }
    fmt::print("{} {:>2} {}: {} [{:.2f} s]\n", o.passed ? "PASS" : "FAIL", id, name, o.detail,
               secs);
    std::fflush(stdout);
    failed_ += o.passed ? 0 : 1;
  }

  [[nodiscard]] int failed() const noexcept { return failed_; }

 private:
  int failed_ = 0;
};

Outcome from_check(const verify::CheckResult& r) {
  std::string d = fmt::format("{} cases", r.cases);
  if (r.sampled) d += fmt::format(", {} sampled", r.sampled);
  if (r.skipped) d += fmt::format(", {} stalled", r.skipped);
  if (!r.passed) d += "; " + r.detail;
  return {r.passed, d};
}

// Criterion 2 on the family used by criterion 1.
Outcome suboptimal_rate() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> dim(1, 50);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const double kappas[] = {10.0, 100.0, 1000.0};
  int checked = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    const double kappa = kappas[i % 3];
    const Index n = dim(rng);
    const auto oracle = bench::random_quadratic(n, kappa, rng());
    const Vector x_star = *oracle->minimizer();
    Vector x0(n);
    for (Index j = 0; j < n; ++j) x0[j] = u(rng);
    const double r0_sq = oracle->eval(x0).gradient.squaredNorm();  // alpha = 1
    StoppingRule stop;
    stop.max_iters = 500;
    RunOptions opts;
    opts.keep_iterates = true;
    const IterationTrace t = run_geo_suboptimal(*oracle, x0, r0_sq, stop, opts);
    for (std::size_t k = 0; k < t.iterates.size(); ++k) {
      const double lhs = (x_star - t.iterates[k]).squaredNorm();
      const double rhs = std::pow(1.0 - 1.0 / kappa, static_cast<double>(t.records[k].k)) * r0_sq +
                         1e-9 * r0_sq;
      worst = std::max(worst, (lhs - rhs) / r0_sq);
      ++checked;
      if (lhs > rhs) {
        return {false, fmt::format("quadratic {} iteration {}: |x*-x_k|² = {:.3e} > {:.3e}", i,
                                   t.records[k].k, lhs, rhs)};
      }
    }
  }
  return {true, fmt::format("100 quadratics, {} iterates, max (lhs - rhs)/R0² = {:.2e}", checked,
                            worst)};
}

// Least-squares slope of log(f - f*) over k <= horizon, as a per-iteration factor.
double fitted_factor(const IterationTrace& t, double f_star, int horizon) {
  double sk = 0, sy = 0, skk = 0, sky = 0;
  int m = 0;
  for (const IterationRecord& r : t.records) {
    if (r.k > horizon) break;
    const double gap = r.value - f_star;
    if (!(gap > 0.0)) continue;
    const double y = std::log(gap);
    sk += r.k;
    sy += y;
    skk += static_cast<double>(r.k) * r.k;
    sky += r.k * y;
    ++m;
  }
  if (m < 2) return std::nan("");
  const double slope = (m * sky - sk * sy) / (m * skk - sk * sk);
  return std::exp(slope);
}

// Criterion 8 on one trace.
std::string geod_contract_violation(const IterationTrace& t) {
  const auto& rec = t.records;
  if (rec.empty()) return "empty trace";
  if (rec[0].gradient_calls != 1 || rec[0].line_searches != 1) {
    return fmt::format("iteration 0 used {} gradients, {} line searches", rec[0].gradient_calls,
                       rec[0].line_searches);
  }
  for (std::size_t k = 1; k < rec.size(); ++k) {
    if (!(rec[k].value < rec[k - 1].value)) {
      return fmt::format("f(x_k+) not strictly decreasing at k = {}", rec[k].k);
    }
    const auto dg = rec[k].gradient_calls - rec[k - 1].gradient_calls;
    const auto dl = rec[k].line_searches - rec[k - 1].line_searches;
    if (dg != 1 || dl != 2 || rec[k].value_calls != 0) {
      return fmt::format("iteration {} used {} gradients, {} line searches, {} values", rec[k].k,
                         dg, dl, rec[k].value_calls);
    }
  }
  return {};
}

struct WorstCaseRuns {
  double f_star = 0.0;
  std::vector<std::pair<Method, IterationTrace>> traces;
};

WorstCaseRuns& worst_case_runs() {
  static WorstCaseRuns runs = [] {
    WorstCaseRuns w;
    const auto oracle = worst_case_oracle(200, 100.0);
    w.f_star = *oracle->spec().f_star;
    const Vector x0 = Vector::Zero(200);
    StoppingRule stop;
    stop.max_iters = 20000;
    stop.grad_tol = 1e-12;
    MethodParams params;
    params.accelerated.kappa_hint = *oracle->spec().beta / oracle->spec().alpha;
    for (const Method m : {Method::geod, Method::afg, Method::afg_restart, Method::sd}) {
      w.traces.emplace_back(m, run_method(m, *oracle, x0, stop, params));
    }
    return w;
  }();
  return runs;
}

Outcome worst_case_experiment() {
  const WorstCaseRuns& w = worst_case_runs();
  const int n = 200;
  const double beta = 100.0;
  const double fast = 1.0 - 0.5 / std::sqrt(beta);
  const double slow = 1.0 - 4.0 / beta;
  bool ok = true;
  std::string d;
  std::vector<std::optional<int>> to_1e6(4);
  const std::vector<double> eps{1e-6};
  for (std::size_t i = 0; i < w.traces.size(); ++i) {
    const auto& [m, t] = w.traces[i];
    const double factor = fitted_factor(t, w.f_star, n);
    const bool good = m == Method::sd ? factor > slow : factor <= fast;
    ok = ok && good;
    to_1e6[i] = bench::iterations_to_accuracy(t, w.f_star, eps)[0].k;
    d += fmt::format("{} factor {:.4f}{}, ", to_string(m), factor, good ? "" : " (bad)");
  }
  const bool fewer = to_1e6[0] && (!to_1e6[3] || *to_1e6[0] < *to_1e6[3]);
  ok = ok && fewer;
  auto show = [](const std::optional<int>& k) { return k ? std::to_string(*k) : "censored"; };
  d += fmt::format("iterations to 1e-6: geod {} vs sd {} (bounds: <= {:.3f}, sd > {:.3f})",
                   show(to_1e6[0]), show(to_1e6[3]), fast, slow);
  return {ok, d};
}

bench::BenchReport& erm_report() {
  static bench::BenchReport report = [] {
    bench::RunConfig cfg;
    cfg.problem = bench::ProblemKind::erm;
    cfg.methods = {Method::geod, Method::afg_restart, Method::afg, Method::sd};
    cfg.synthetic.count = 5;
    cfg.lambdas = {1e-4, 1e-6, 1e-8};
    cfg.out_dir.clear();
    return bench::run_bench(cfg);
  }();
  return report;
}

Outcome classification_ordering() {
  const bench::BenchReport& report = erm_report();
  if (report.incomplete()) return {false, "bench errors: " + report.errors.front()};
  const double eps = 1e-8;
  const auto& methods = report.config.methods;
  int hold = 0;
  int cells = 0;
  std::string misses;
  for (std::size_t p = 0; p < report.problems.size(); ++p) {
    std::vector<double> k(methods.size(), std::numeric_limits<double>::infinity());
    for (const bench::RunResult& r : report.runs) {
      if (r.problem != p) continue;
      const auto idx = static_cast<std::size_t>(
          std::find(methods.begin(), methods.end(), r.method) - methods.begin());
      for (const auto& h : r.hits) {
        if (h.epsilon == eps && h.k) k[idx] = *h.k;
      }
    }
    ++cells;
    if (std::is_sorted(k.begin(), k.end())) {
      ++hold;
    } else {
      misses += fmt::format(" {} lambda={:g} ({:g}/{:g}/{:g}/{:g})", report.problems[p].name,
                            report.problems[p].param, k[0], k[1], k[2], k[3]);
    }
  }
  std::string d = fmt::format("ordering geod <= afg_restart <= afg <= sd at 1e-8 holds in {}/{} "
                              "cells (need 12)", hold, cells);
  if (!misses.empty()) d += "; misses (geod/afgwr/afg/sd):" + misses;
  return {cells == 15 && hold >= 12, d};
}

Outcome geod_contract() {
  int runs = 0;
  for (const auto& [m, t] : worst_case_runs().traces) {
    if (m != Method::geod) continue;
    ++runs;
    const std::string v = geod_contract_violation(t);
    if (!v.empty()) return {false, "worst case: " + v};
  }
  const bench::BenchReport& report = erm_report();
  for (const bench::RunResult& r : report.runs) {
    if (r.method != Method::geod) continue;
    if (!r.ok()) return {false, *r.error};
    ++runs;
    const std::string v = geod_contract_violation(r.trace);
    if (!v.empty()) {
      return {false, fmt::format("{} lambda={:g}: {}", report.problems[r.problem].name,
                                 report.problems[r.problem].param, v)};
    }
  }
  return {runs == 16, fmt::format("{} GeoD runs: strict decrease, 1 gradient + 2 line searches "
                                  "per iteration", runs)};
}

Outcome parser_fuzz() {
  std::mt19937_64 rng(9);
  auto serialize = [](const SparseDataset& d) {
    std::ostringstream out;
    write_libsvm(out, d);
    return out.str();
  };
  for (int i = 0; i < 100; ++i) {
    const SparseDataset d = testing::random_dataset(rng);
    std::istringstream in(serialize(d));
    if (!(parse_libsvm(in, LibsvmOptions{d.n_features()}) == d)) {
      return {false, fmt::format("round trip {} differs", i)};
    }
  }
  std::vector<std::string> seeds;
  for (int i = 0; i < 64; ++i) seeds.push_back(serialize(testing::random_dataset(rng)));
  int parsed = 0;
  int rejected = 0;
  for (int i = 0; i < 100000; ++i) {
    std::istringstream in(testing::mutate_bytes(seeds[static_cast<std::size_t>(i) % seeds.size()], rng));
    try {
      (void)parse_libsvm(in);
      ++parsed;
    } catch (const Error&) {
      ++rejected;
    } catch (const std::exception& e) {
      return {false, fmt::format("mutation {}: unstructured exception {}", i, e.what())};
    }
  }
  return {true, fmt::format("100 round trips; 100000 mutations: {} parsed, {} structured errors",
                            parsed, rejected)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome bench_determinism() {
  const std::string cli = GEOD_CLI_PATH;
  if (cli.empty() || !std::filesystem::exists(cli)) return {false, "CLI binary not found"};
  const auto root = std::filesystem::temp_directory_path() / "geod_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::filesystem::create_directories(root);
  {
    std::ofstream cfg(root / "sweep.cfg");
    cfg << "problem = worst_case\n"
           "methods = geod, sd, afg, afg_restart\n"
           "n = 100\n"
           "betas = 1e2, 1e3\n"
           "max_iters = 3000\n"
           "seed = 5\n"
           "write_traces = false\n";
  }
  for (const char* run : {"a", "b"}) {
    const std::string cmd = fmt::format("\"{}\" bench \"{}\" --out \"{}\" > \"{}\" 2>&1", cli,
                                        (root / "sweep.cfg").string(), (root / run).string(),
                                        (root / (std::string(run) + ".log")).string());
    if (const int rc = std::system(cmd.c_str()); rc != 0) {
      return {false, fmt::format("bench exited with {}", rc)};
    }
  }
  int files = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext != ".csv" && ext != ".svg") continue;
    const auto rel = std::filesystem::relative(entry.path(), root / "a");
    if (!std::filesystem::exists(root / "b" / rel)) return {false, rel.string() + " missing"};
    if (slurp(entry.path()) != slurp(root / "b" / rel)) {
      return {false, rel.string() + " differs"};
    }
    ++files;
  }
  const bool has_report = std::filesystem::exists(root / "a" / "report.csv");
  return {has_report && files >= 3,
          fmt::format("{} CSV/SVG files byte-identical across two runs", files)};
}

}  // namespace

int main() {
  Suite s;
  verify::VerifyOptions vo;
  vo.quadratics = 100;
  vo.lemma_instances = 10000;
  vo.ball_pairs = 10000;
  vo.samples_per_case = 100;
  vo.gradient_points = 1000;

  s.run(1, "theory rate and containment", 10.0,
        [&] { return from_check(verify::check_theory_rate(vo)); });
  s.run(2, "suboptimal geometric rate", 10.0, suboptimal_rate);
  s.run(3, "shrink lemma", 30.0, [&] { return from_check(verify::check_shrink_lemma(vo)); });
  s.run(4, "two-ball enclosing ball", 30.0,
        [&] { return from_check(verify::check_enclosing_ball(vo)); });
  s.run(5, "gradient finite differences", 5.0,
        [&] { return from_check(verify::check_gradients(vo)); });
  s.run(6, "worst-case chain n=200 beta=100", 30.0, worst_case_experiment);
  s.run(7, "classification ordering", 120.0, classification_ordering);
  s.run(8, "GeoD contract", 0.0, geod_contract);
  s.run(9, "parser round trip and fuzz", 30.0, parser_fuzz);
  s.run(10, "bench determinism", 0.0, bench_determinism);
  fmt::print("{} of 10 criteria failed\n", s.failed());
  return s.failed() == 0 ? 0 : 1;
}
