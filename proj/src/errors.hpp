#pragma once

#include <stdexcept>
#include <string>

namespace rck {

// One error type for the whole engine.  The kind is what per-point check
// runners key on when they turn a failure into a skip reason.
enum class ErrorKind {
  ShapeMismatch,
  IndexOutOfRange,
  OrderExceeded,
  DivisionByZero,
  DomainError,
  SyntaxError,
  UnknownIdentifier,
  NonConstantExponent,
  DegenerateMetric,
  DimensionMismatch,
  DimensionTooSmall,
  SplitUnavailable,
  FrameConstructionFailed,
  PotentialNearZero,
  NonPositiveLapse,
  NonPositiveWarping,
  NotASoliton,
  IntegrationFailure,
  ShootingNotConverged,
  InvalidArgument,
  ConfigError,
  IoError,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // Stable token used in reports as a skip reason.
  const char* kind_name() const { return kind_name(kind_); }

  static const char* kind_name(ErrorKind k) {
    switch (k) {
      case ErrorKind::ShapeMismatch: return "shape_mismatch";
      case ErrorKind::IndexOutOfRange: return "index_out_of_range";
      case ErrorKind::OrderExceeded: return "order_exceeded";
      case ErrorKind::DivisionByZero: return "division_by_zero";
      case ErrorKind::DomainError: return "domain_error";
      case ErrorKind::SyntaxError: return "syntax_error";
      case ErrorKind::UnknownIdentifier: return "unknown_identifier";
      case ErrorKind::NonConstantExponent: return "non_constant_exponent";
      case ErrorKind::DegenerateMetric: return "degenerate_metric";
      case ErrorKind::DimensionMismatch: return "dimension_mismatch";
      case ErrorKind::DimensionTooSmall: return "dimension_too_small";
      case ErrorKind::SplitUnavailable: return "split_unavailable";
      case ErrorKind::FrameConstructionFailed: return "frame_construction_failed";
      case ErrorKind::PotentialNearZero: return "potential_near_zero";
      case ErrorKind::NonPositiveLapse: return "nonpositive_lapse";
      case ErrorKind::NonPositiveWarping: return "nonpositive_warping";
      case ErrorKind::NotASoliton: return "not_a_soliton";
      case ErrorKind::IntegrationFailure: return "integration_failure";
      case ErrorKind::ShootingNotConverged: return "shooting_not_converged";
      case ErrorKind::InvalidArgument: return "invalid_argument";
      case ErrorKind::ConfigError: return "config_error";
      case ErrorKind::IoError: return "io_error";
    }
    return "unknown";
  }

private:
  ErrorKind kind_;
};

}  // namespace rck
