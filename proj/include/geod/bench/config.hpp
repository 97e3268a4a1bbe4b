#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "geod/bench/accuracy.hpp"
#include "geod/error.hpp"
#include "geod/optimizers/methods.hpp"

namespace geod::bench {

enum class ProblemKind { quadratic, erm, worst_case };

constexpr std::string_view to_string(ProblemKind p) noexcept {
  switch (p) {
    case ProblemKind::quadratic: return "quadratic";
    case ProblemKind::erm: return "erm";
    case ProblemKind::worst_case: return "worst_case";
  }
  return "unknown";
}

/// Synthetic stand-in datasets for the ERM problem.
struct SyntheticSpec {
  int count = 0;
  int samples = 200;
  int features = 50;
  double separation = 2.0;
  double density = 0.2;
};

struct RunConfig {
  ProblemKind problem = ProblemKind::quadratic;
  std::vector<Method> methods;
  std::vector<double> epsilons = default_epsilons();

  int max_iters = 1000;
  double grad_tol = 1e-10;
  std::uint64_t seed = 1;
  std::string out_dir = "bench_out";
  int workers = 0;              // 0: hardware concurrency
  bool write_traces = true;
  bool write_plots = true;

  // AFG tuning: alpha estimates beta_hat * 2^j for j in [tune_min_exp, tune_max_exp].
  bool tune = true;
  int tune_min_exp = -20;
  int tune_max_exp = 4;
  double kappa_hint = 0.0;      // used when tune is off; 0 means the oracle's kappa

  std::optional<double> alpha;  // override for the geometric methods

  int n = 50;                   // quadratic and worst_case dimension
  std::vector<double> kappas{10.0, 100.0, 1000.0};
  int instances = 5;            // random quadratics per kappa
  std::vector<double> betas{1e2, 1e4};

  std::vector<std::string> datasets;
  SyntheticSpec synthetic;
  std::vector<double> lambdas{1e-4, 1e-6, 1e-8};
  int reference_factor = 10;
  double reference_grad_tol = 1e-14;

  void validate() const {
    auto fail = [](const std::string& msg) { throw Error(Errc::config_error, msg); };
    if (methods.empty()) fail("methods list is empty");
    try {
      validate_epsilons(epsilons);
    } catch (const Error& e) {
      fail(e.what());
    }
    if (max_iters < 1) fail("max_iters must be >= 1");
    if (!(grad_tol >= 0.0)) fail("grad_tol must be >= 0");
    if (workers < 0) fail("workers must be >= 0");
    if (tune_min_exp > tune_max_exp) fail("tune_min_exp > tune_max_exp");
    if (kappa_hint != 0.0 && !(kappa_hint >= 1.0)) fail("kappa_hint must be >= 1");
    if (alpha && !(*alpha > 0.0)) fail("alpha must be positive");
    if (reference_factor < 1) fail("reference_factor must be >= 1");
    switch (problem) {
      case ProblemKind::quadratic:
        if (n < 1) fail("n must be >= 1");
        if (kappas.empty()) fail("kappas list is empty");
        for (const double k : kappas) {
          if (!(k >= 1.0) || !std::isfinite(k)) fail("kappas must be >= 1");
        }
        if (instances < 1) fail("instances must be >= 1");
        break;
      case ProblemKind::worst_case:
        if (n < 2) fail("worst_case needs n >= 2");
        if (betas.empty()) fail("betas list is empty");
        for (const double b : betas) {
          if (!(b > 0.0) || !std::isfinite(b)) fail("betas must be positive");
        }
        break;
      case ProblemKind::erm:
        if (lambdas.empty()) fail("lambdas list is empty");
        for (const double l : lambdas) {
          if (!(l > 0.0) || !std::isfinite(l)) fail("lambda values must be > 0");
        }
        if (datasets.empty() && synthetic.count < 1) {
          fail("erm needs datasets or synthetic_count >= 1");
        }
        if (synthetic.count > 0 &&
            (synthetic.samples < 1 || synthetic.features < 1 || !(synthetic.density > 0.0) ||
             synthetic.density > 1.0 || !(synthetic.separation >= 0.0))) {
          fail("invalid synthetic dataset parameters");
        }
        break;
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const std::string_view item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(Errc::config_error,
                "bad value '" + std::string(text) + "' for key '" + std::string(key) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) {
      throw Error(Errc::config_error, "non-finite value for key '" + std::string(key) + "'");
    }
  }
  return v;
}

inline bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "on" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "off" || text == "0" || text == "no") return false;
  throw Error(Errc::config_error, "bad boolean for key '" + std::string(key) + "'");
}

inline std::vector<double> parse_reals(std::string_view key, std::string_view text) {
  std::vector<double> out;
  for (const std::string_view item : split_list(text)) out.push_back(parse_number<double>(key, item));
  return out;
}

}  // namespace detail

/// Applies one `key = value` setting. Lists are comma separated.
inline void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
  using detail::parse_number;
  if (key == "problem") {
    if (value == "quadratic") cfg.problem = ProblemKind::quadratic;
    else if (value == "erm") cfg.problem = ProblemKind::erm;
    else if (value == "worst_case") cfg.problem = ProblemKind::worst_case;
    else throw Error(Errc::config_error, "unknown problem '" + std::string(value) + "'");
  } else if (key == "methods") {
    cfg.methods.clear();
    for (const std::string_view m : detail::split_list(value)) cfg.methods.push_back(parse_method(m));
  } else if (key == "epsilons") {
    cfg.epsilons = detail::parse_reals(key, value);
  } else if (key == "max_iters") {
    cfg.max_iters = parse_number<int>(key, value);
  } else if (key == "grad_tol") {
    cfg.grad_tol = parse_number<double>(key, value);
  } else if (key == "seed") {
    cfg.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "out") {
    cfg.out_dir = std::string(value);
  } else if (key == "workers") {
    cfg.workers = parse_number<int>(key, value);
  } else if (key == "write_traces") {
    cfg.write_traces = detail::parse_bool(key, value);
  } else if (key == "write_plots") {
    cfg.write_plots = detail::parse_bool(key, value);
  } else if (key == "tune") {
    cfg.tune = detail::parse_bool(key, value);
  } else if (key == "tune_min_exp") {
    cfg.tune_min_exp = parse_number<int>(key, value);
  } else if (key == "tune_max_exp") {
    cfg.tune_max_exp = parse_number<int>(key, value);
  } else if (key == "kappa_hint") {
    cfg.kappa_hint = parse_number<double>(key, value);
  } else if (key == "alpha") {
    cfg.alpha = parse_number<double>(key, value);
  } else if (key == "n") {
    cfg.n = parse_number<int>(key, value);
  } else if (key == "kappas") {
    cfg.kappas = detail::parse_reals(key, value);
  } else if (key == "instances") {
    cfg.instances = parse_number<int>(key, value);
  } else if (key == "betas") {
    cfg.betas = detail::parse_reals(key, value);
  } else if (key == "datasets") {
    cfg.datasets.clear();
    for (const std::string_view d : detail::split_list(value)) cfg.datasets.emplace_back(d);
  } else if (key == "lambdas") {
    cfg.lambdas = detail::parse_reals(key, value);
  } else if (key == "synthetic_count") {
    cfg.synthetic.count = parse_number<int>(key, value);
  } else if (key == "synthetic_samples") {
    cfg.synthetic.samples = parse_number<int>(key, value);
  } else if (key == "synthetic_features") {
    cfg.synthetic.features = parse_number<int>(key, value);
  } else if (key == "synthetic_separation") {
    cfg.synthetic.separation = parse_number<double>(key, value);
  } else if (key == "synthetic_density") {
    cfg.synthetic.density = parse_number<double>(key, value);
  } else if (key == "reference_factor") {
    cfg.reference_factor = parse_number<int>(key, value);
  } else if (key == "reference_grad_tol") {
    cfg.reference_grad_tol = parse_number<double>(key, value);
  } else {
    throw Error(Errc::config_error, "unknown key '" + std::string(key) + "'");
  }
}

/// Reads `key = value` lines; '#' starts a comment. Later keys override
/// earlier ones. The result is not validated.
inline RunConfig parse_config(std::istream& in, RunConfig cfg = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest(line);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    rest = detail::trim(rest);
    if (rest.empty()) continue;
    const auto eq = rest.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::config_error, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string_view key = detail::trim(rest.substr(0, eq));
    const std::string_view value = detail::trim(rest.substr(eq + 1));
    if (key.empty()) throw Error(Errc::config_error, "line " + std::to_string(line_no) + ": empty key");
    try {
      apply_setting(cfg, key, value);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::config_error, "cannot open config " + path);
  return parse_config(in);
}

}  // namespace geod::bench
