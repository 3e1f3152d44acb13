#include "swe/error.hpp"

namespace swe {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DataInvalid: return "DataInvalid";
    case ErrorCode::BadRamp: return "BadRamp";
    case ErrorCode::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::SingularWeight: return "SingularWeight";
    case ErrorCode::NotSubcritical: return "NotSubcritical";
    case ErrorCode::BadPenalty: return "BadPenalty";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonSquareGrid: return "NonSquareGrid";
    case ErrorCode::RunnerFailure: return "RunnerFailure";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace swe
