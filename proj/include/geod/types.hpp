#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "geod/error.hpp"

namespace geod {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline void require_same_dimension(const Vector& a, const Vector& b, const char* where) {
  if (a.size() != b.size()) {
    throw Error(Errc::dimension_mismatch, std::string(where) + ": " + std::to_string(a.size()) +
                                              " vs " + std::to_string(b.size()));
  }
}

inline bool all_finite(const Vector& v) noexcept { return v.allFinite(); }

}  // namespace geod
