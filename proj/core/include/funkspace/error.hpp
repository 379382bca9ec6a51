#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace funkspace {

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  PointOutsideHalfspace,
  PointNotInterior,
  PointNotOnBoundary,
  NumericFailure,
  Unbounded,
  FiniteHitsRequired,
  InvalidHPoint,
  InvalidTangent,
  CoincidentPoints,
  PointOnGeodesic,
  ParseError,
  ValidationError,
  UnknownPoint,
  MetricSpaceMismatch,
  RadiusUnreachable,
  IOError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI can map it onto a stable message and exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace funkspace
