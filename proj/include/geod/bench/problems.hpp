#pragma once

#include <fmt/format.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "geod/bench/config.hpp"
#include "geod/libsvm.hpp"
#include "geod/objectives/quadratic.hpp"
#include "geod/objectives/smoothed_hinge.hpp"
#include "geod/objectives/worst_case.hpp"
#include "geod/synthetic.hpp"

namespace geod::bench {

/// One problem of a sweep: an oracle, its start point and what is known
/// about it. `beta_hat` is the smoothness estimate handed to the AFG
/// baselines.
struct ProblemInstance {
  std::string name;
  std::string param_name;
  double param = 0.0;
  std::shared_ptr<const Oracle> oracle;
  Vector x0;
  std::optional<double> f_star;
  double beta_hat = 0.0;

  [[nodiscard]] std::string label() const { return fmt::format("{}_{}={}", name, param_name, param); }
};

/// Diagonal quadratic with eigenvalues log-uniform in [1, kappa] (both ends
/// present) and b ~ N(0, I).
inline std::shared_ptr<const Oracle> random_quadratic(Index n, double kappa, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector diag(n);
  Vector b(n);
  for (Index i = 0; i < n; ++i) diag[i] = std::pow(kappa, u(rng));
  for (Index i = 0; i < n; ++i) b[i] = normal(rng);
  diag[0] = 1.0;
  if (n > 1) diag[n - 1] = kappa;
  return diagonal_quadratic_oracle(diag, std::move(b));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline std::vector<ProblemInstance> build_problems(const RunConfig& cfg) {
  std::vector<ProblemInstance> out;
  switch (cfg.problem) {
    case ProblemKind::quadratic:
      for (std::size_t ki = 0; ki < cfg.kappas.size(); ++ki) {
        for (int i = 0; i < cfg.instances; ++i) {
          ProblemInstance p;
          p.name = fmt::format("quadratic{}", i);
          p.param_name = "kappa";
          p.param = cfg.kappas[ki];
          p.oracle = random_quadratic(cfg.n, cfg.kappas[ki], mix_seed(cfg.seed, ki, i));
          p.f_star = p.oracle->spec().f_star;
          p.beta_hat = *p.oracle->spec().beta;
          p.x0 = Vector::Zero(cfg.n);
          out.push_back(std::move(p));
        }
      }
      break;
    case ProblemKind::worst_case:
      for (const double beta : cfg.betas) {
        ProblemInstance p;
        p.name = fmt::format("worst_case_n{}", cfg.n);
        p.param_name = "beta";
        p.param = beta;
        p.oracle = worst_case_oracle(cfg.n, beta);
        p.f_star = p.oracle->spec().f_star;
        p.beta_hat = *p.oracle->spec().beta;
        p.x0 = Vector::Zero(cfg.n);
        out.push_back(std::move(p));
      }
      break;
    case ProblemKind::erm: {
      std::vector<std::pair<std::string, SparseDataset>> sets;
      for (const std::string& path : cfg.datasets) {
        sets.emplace_back(std::filesystem::path(path).stem().string(), load_libsvm(path));
      }
      for (int i = 0; i < cfg.synthetic.count; ++i) {
        sets.emplace_back(fmt::format("synthetic{}", i),
                          synthetic_classification(
                              static_cast<std::size_t>(cfg.synthetic.samples),
                              static_cast<std::size_t>(cfg.synthetic.features),
                              cfg.synthetic.separation, cfg.synthetic.density,
                              mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(i))));
      }
      for (const auto& [name, data] : sets) {
        for (const double lambda : cfg.lambdas) {
          auto oracle = std::make_shared<SmoothedHingeErmOracle>(data, lambda);
          ProblemInstance p;
          p.name = name;
          p.param_name = "lambda";
          p.param = lambda;
          p.beta_hat = oracle->estimate_beta();
          p.x0 = Vector::Zero(oracle->dimension());
          p.oracle = std::move(oracle);
          out.push_back(std::move(p));
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace geod::bench
