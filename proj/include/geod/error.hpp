#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace geod {

enum class Errc {
  dimension_mismatch,
  disjoint_balls,
  sampling_stalled,
  precondition_violated,
  negative_radius,
  zero_direction,
  non_convex_detected,
  non_finite_input,
  not_positive_definite,
  empty_dataset,
  non_positive_lambda,
  invalid_dimension,
  malformed_line,
  too_many_classes,
  empty_input,
  invalid_parameter,
  alpha_too_large,
  rate_violation,
  bad_reference,
  empty_results,
  config_error,
  io_error,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::disjoint_balls: return "DisjointBalls";
    case Errc::sampling_stalled: return "SamplingStalled";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::negative_radius: return "NegativeRadius";
    case Errc::zero_direction: return "ZeroDirection";
    case Errc::non_convex_detected: return "NonConvexDetected";
    case Errc::non_finite_input: return "NonFiniteInput";
    case Errc::not_positive_definite: return "NotPositiveDefinite";
    case Errc::empty_dataset: return "EmptyDataset";
    case Errc::non_positive_lambda: return "NonPositiveLambda";
    case Errc::invalid_dimension: return "InvalidDimension";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::too_many_classes: return "TooManyClasses";
    case Errc::empty_input: return "EmptyInput";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::alpha_too_large: return "AlphaTooLarge";
    case Errc::rate_violation: return "RateViolation";
    case Errc::bad_reference: return "BadReference";
    case Errc::empty_results: return "EmptyResults";
    case Errc::config_error: return "ConfigError";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parser failure pinned to a 1-based line number.
class MalformedLine : public Error {
 public:
  MalformedLine(std::size_t line_no, const std::string& why)
      : Error(Errc::malformed_line, "line " + std::to_string(line_no) + ": " + why),
        line_no_(line_no) {}

  [[nodiscard]] std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

}  // namespace geod
