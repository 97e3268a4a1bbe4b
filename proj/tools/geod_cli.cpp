// geod: run, benchmark and verify the geometric descent solvers.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "geod/bench.hpp"
#include "geod/geod.hpp"
#include "geod/verify.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kRuntimeError = 2, kVerifyFailed = 3 };

std::vector<double> parse_list(const std::string& text, std::string_view key) {
  return geod::bench::detail::parse_reals(key, text);
}

bool is_config_error(geod::Errc c) {
  return c == geod::Errc::config_error || c == geod::Errc::invalid_parameter;
}

struct RunArgs {
  std::string problem = "quadratic";
  std::string method = "geod";
  int n = 50;
  double kappa = 100.0;
  double beta = 100.0;
  double lambda = 1e-4;
  std::string dataset;
  int samples = 200;
  int features = 50;
  std::optional<double> alpha;
  std::optional<double> kappa_hint;
  int max_iters = 1000;
  double grad_tol = 1e-10;
  std::uint64_t seed = 1;
  std::string out = "run_out";
  std::string epsilons;
};

int cmd_run(const RunArgs& a) {
  using namespace geod;
  bench::RunConfig cfg;
  bench::apply_setting(cfg, "problem", a.problem);
  cfg.seed = a.seed;
  cfg.n = a.n;
  cfg.kappas = {a.kappa};
  cfg.instances = 1;
  cfg.betas = {a.beta};
  cfg.lambdas = {a.lambda};
  if (!a.dataset.empty()) {
    cfg.datasets = {a.dataset};
  } else {
    cfg.synthetic.count = 1;
    cfg.synthetic.samples = a.samples;
    cfg.synthetic.features = a.features;
  }
  cfg.methods = {parse_method(a.method)};
  if (!a.epsilons.empty()) cfg.epsilons = parse_list(a.epsilons, "epsilons");
  cfg.validate();

  const bench::ProblemInstance p = bench::build_problems(cfg).front();
  const Method method = cfg.methods.front();
  StoppingRule stop;
  stop.max_iters = a.max_iters;
  stop.grad_tol = a.grad_tol;
  MethodParams params;
  params.alpha = a.alpha;
  params.accelerated.beta = p.beta_hat;
  params.accelerated.kappa_hint =
      a.kappa_hint.value_or(std::max(1.0, p.beta_hat / p.oracle->spec().alpha));
  const IterationTrace trace = run_method(method, *p.oracle, p.x0, stop, params);

  const std::filesystem::path dir(a.out);
  bench::emit_csv(trace, (dir / "trace.csv").string(), p.f_star);
  bench::emit_svg(trace, (dir / "trace.svg").string(), p.f_star);

  fmt::print("problem {} method {}: {} iterations, f = {}, |grad| = {}, stop = {}\n", p.label(),
             to_string(method), trace.records.back().k, trace.final_value(),
             trace.records.back().grad_norm, to_string(trace.reason));
  if (p.f_star) {
    for (const auto& h : bench::iterations_to_accuracy(trace, *p.f_star, cfg.epsilons)) {
      fmt::print("  eps {:g}: {}\n", h.epsilon, h.k ? std::to_string(*h.k) : "censored");
    }
  }
  fmt::print("wrote {}\n", (dir / "trace.csv").string());
  return kOk;
}

struct BenchOverrides {
  std::string out, methods, lambdas, betas, kappas, datasets, epsilons;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_iters, n, workers;
  std::optional<double> grad_tol, alpha;
};

int cmd_bench(const std::string& config_path, const BenchOverrides& o) {
  using namespace geod;
  bench::RunConfig cfg = bench::load_config(config_path);
  auto set = [&cfg](std::string_view key, const std::string& v) {
    if (!v.empty()) bench::apply_setting(cfg, key, v);
  };
  set("out", o.out);
  set("methods", o.methods);
  set("lambdas", o.lambdas);
  set("betas", o.betas);
  set("kappas", o.kappas);
  set("datasets", o.datasets);
  set("epsilons", o.epsilons);
  if (o.seed) cfg.seed = *o.seed;
  if (o.max_iters) cfg.max_iters = *o.max_iters;
  if (o.n) cfg.n = *o.n;
  if (o.workers) cfg.workers = *o.workers;
  if (o.grad_tol) cfg.grad_tol = *o.grad_tol;
  if (o.alpha) cfg.alpha = *o.alpha;

  const bench::BenchReport report = bench::run_bench(cfg);
  fmt::print("{:<12} {:>8} {:>10} {:>10} {:>9}\n", "method", "epsilon", "median", "p90", "reached");
  for (const auto& row : report.aggregate) {
    auto cell = [](const std::optional<double>& v) {
      return v ? fmt::format("{:g}", *v) : std::string("censored");
    };
    fmt::print("{:<12} {:>8g} {:>10} {:>10} {:>5}/{}\n", to_string(row.method), row.epsilon,
               cell(row.median), cell(row.p90), row.reached, row.runs);
  }
  if (!cfg.out_dir.empty()) fmt::print("wrote {}\n", cfg.out_dir);
  if (report.incomplete()) {
    for (const auto& e : report.errors) fmt::print(stderr, "error: {}\n", e);
    fmt::print(stderr, "report incomplete: {} failed runs\n", report.errors.size());
    return kRuntimeError;
  }
  return kOk;
}

int cmd_verify(const geod::verify::VerifyOptions& opts) {
  bool all = true;
  for (const auto& r : geod::verify::run_all(opts)) {
    std::string extra;
    if (r.sampled) extra += fmt::format(", {} sampled", r.sampled);
    if (r.skipped) extra += fmt::format(", {} stalled", r.skipped);
    fmt::print("{} {} ({} cases{})\n", r.passed ? "PASS" : "FAIL", r.name, r.cases, extra);
    if (!r.passed) fmt::print("  {}\n", r.detail);
    all = all && r.passed;
  }
  return all ? kOk : kVerifyFailed;
}

struct GenArgs {
  int samples = 200;
  int features = 50;
  double separation = 2.0;
  double density = 0.2;
  std::uint64_t seed = 1;
  std::string out = "synthetic.svm";
};

int cmd_gen(const GenArgs& g) {
  if (g.samples < 1 || g.features < 1) {
    throw geod::Error(geod::Errc::invalid_parameter, "samples and features must be >= 1");
  }
  const auto data = geod::synthetic_classification(static_cast<std::size_t>(g.samples),
                                                   static_cast<std::size_t>(g.features),
                                                   g.separation, g.density, g.seed);
  geod::save_libsvm(g.out, data);
  fmt::print("wrote {} samples, {} features to {}\n", data.n_samples(), data.n_features(), g.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometric descent solvers: runs, sweeps and invariant checks"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one method on one problem; writes trace CSV/SVG");
  run_cmd->add_option("--problem", run.problem, "quadratic | worst_case | erm")
      ->check(CLI::IsMember({"quadratic", "worst_case", "erm"}));
  run_cmd->add_option("--method", run.method,
                      "geod | geod_theory | geo_subopt | sd | afg | afg_restart");
  run_cmd->add_option("--n", run.n, "dimension (quadratic, worst_case)");
  run_cmd->add_option("--kappa", run.kappa, "condition number (quadratic)");
  run_cmd->add_option("--beta", run.beta, "chain weight (worst_case)");
  run_cmd->add_option("--lambda", run.lambda, "regularization (erm)");
  run_cmd->add_option("--dataset", run.dataset, "LIBSVM file (erm); synthetic data if absent");
  run_cmd->add_option("--samples", run.samples, "synthetic samples (erm)");
  run_cmd->add_option("--features", run.features, "synthetic features (erm)");
  run_cmd->add_option("--alpha", run.alpha, "strong convexity used by geometric methods");
  run_cmd->add_option("--kappa-hint", run.kappa_hint, "AFG momentum condition number");
  run_cmd->add_option("--max-iters", run.max_iters);
  run_cmd->add_option("--grad-tol", run.grad_tol, "relative to 1 + |grad f(x0)|");
  run_cmd->add_option("--seed", run.seed);
  run_cmd->add_option("--out", run.out, "output directory");
  run_cmd->add_option("--epsilons", run.epsilons, "comma-separated accuracy targets");

  std::string config_path;
  BenchOverrides bo;
  auto* bench_cmd = app.add_subcommand("bench", "Run a sweep from a key = value config file");
  bench_cmd->add_option("config", config_path, "config file")->required();
  bench_cmd->add_option("--out", bo.out, "output directory");
  bench_cmd->add_option("--method", bo.methods, "comma-separated methods");
  bench_cmd->add_option("--lambda", bo.lambdas, "comma-separated lambdas");
  bench_cmd->add_option("--beta", bo.betas, "comma-separated chain weights");
  bench_cmd->add_option("--kappa", bo.kappas, "comma-separated condition numbers");
  bench_cmd->add_option("--dataset", bo.datasets, "comma-separated LIBSVM files");
  bench_cmd->add_option("--epsilons", bo.epsilons, "comma-separated accuracy targets");
  bench_cmd->add_option("--seed", bo.seed);
  bench_cmd->add_option("--max-iters", bo.max_iters);
  bench_cmd->add_option("--n", bo.n);
  bench_cmd->add_option("--workers", bo.workers, "0 = hardware concurrency");
  bench_cmd->add_option("--grad-tol", bo.grad_tol);
  bench_cmd->add_option("--alpha", bo.alpha);

  geod::verify::VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "Check rates, containment and gradients");
  verify_cmd->add_option("--seed", vo.seed);
  verify_cmd->add_option("--quadratics", vo.quadratics);
  verify_cmd->add_option("--lemma-instances", vo.lemma_instances);
  verify_cmd->add_option("--ball-pairs", vo.ball_pairs);
  verify_cmd->add_option("--samples", vo.samples_per_case);
  verify_cmd->add_option("--gradient-points", vo.gradient_points);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Write a synthetic dataset in LIBSVM format");
  gen_cmd->add_option("--samples", gen.samples);
  gen_cmd->add_option("--n,--features", gen.features, "number of features");
  gen_cmd->add_option("--separation", gen.separation);
  gen_cmd->add_option("--density", gen.density);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--out", gen.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*bench_cmd) return cmd_bench(config_path, bo);
    if (*verify_cmd) return cmd_verify(vo);
    if (*gen_cmd) return cmd_gen(gen);
  } catch (const geod::Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return is_config_error(e.code()) ? kConfigError : kRuntimeError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kRuntimeError;
  }
  return kOk;
}
