#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "geod/optimizers/baselines.hpp"
#include "geod/optimizers/geometric.hpp"

namespace geod {

enum class Method { geod, geod_theory, geo_subopt, sd, afg, afg_restart };

inline constexpr std::array<Method, 6> kAllMethods = {Method::geod, Method::geod_theory,
                                                      Method::geo_subopt, Method::sd,
                                                      Method::afg, Method::afg_restart};

constexpr std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::geod: return "geod";
    case Method::geod_theory: return "geod_theory";
    case Method::geo_subopt: return "geo_subopt";
    case Method::sd: return "sd";
    case Method::afg: return "afg";
    case Method::afg_restart: return "afg_restart";
  }
  return "unknown";
}

inline Method parse_method(std::string_view name) {
  for (const Method m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  throw Error(Errc::config_error, "unknown method '" + std::string(name) + "'");
}

/// True for the momentum methods whose kappa_hint gets tuned.
constexpr bool is_accelerated(Method m) noexcept {
  return m == Method::afg || m == Method::afg_restart;
}

struct MethodParams {
  std::optional<double> alpha;         // geometric methods
  AcceleratedOptions accelerated;      // afg, afg_restart
  std::optional<double> r0_sq;         // geo_subopt; defaults to |grad f(x0)|²/alpha²
};

inline IterationTrace run_method(Method method, const Oracle& oracle, const Vector& x0,
                                 const StoppingRule& stop, const MethodParams& params = {},
                                 const RunOptions& opts = {}) {
  const GeometricOptions geo{params.alpha};
  switch (method) {
    case Method::geod: return run_geod(oracle, x0, stop, opts, geo);
    case Method::geod_theory: return run_geod_theory(oracle, x0, stop, opts, geo);
    case Method::geo_subopt: {
      double r0_sq = 0.0;
      if (params.r0_sq) {
        r0_sq = *params.r0_sq;
      } else {
        const double alpha = params.alpha.value_or(oracle.spec().alpha);
        r0_sq = oracle.eval(x0).gradient.squaredNorm() / (alpha * alpha);
      }
      return run_geo_suboptimal(oracle, x0, r0_sq, stop, opts, geo);
    }
    case Method::sd: return run_steepest_descent(oracle, x0, stop, opts);
    case Method::afg: return run_afg(oracle, x0, stop, params.accelerated, opts);
    case Method::afg_restart: return run_afg_restart(oracle, x0, stop, params.accelerated, opts);
  }
  throw Error(Errc::invalid_parameter, "unknown method");
}

}  // namespace geod
