#include "funkspace/error.hpp"

namespace funkspace {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PointOutsideHalfspace: return "PointOutsideHalfspace";
    case ErrorCode::PointNotInterior: return "PointNotInterior";
    case ErrorCode::PointNotOnBoundary: return "PointNotOnBoundary";
    case ErrorCode::NumericFailure: return "NumericFailure";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::FiniteHitsRequired: return "FiniteHitsRequired";
    case ErrorCode::InvalidHPoint: return "InvalidHPoint";
    case ErrorCode::InvalidTangent: return "InvalidTangent";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::PointOnGeodesic: return "PointOnGeodesic";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::MetricSpaceMismatch: return "MetricSpaceMismatch";
    case ErrorCode::RadiusUnreachable: return "RadiusUnreachable";
    case ErrorCode::IOError: return "IOError";
  }
  return "Unknown";
}

}  // namespace funkspace
