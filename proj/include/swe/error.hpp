#pragma once

#include <stdexcept>
#include <string>

namespace swe {

enum class ErrorCode {
  UnsupportedOrder,
  GridTooSmall,
  LengthMismatch,
  DataInvalid,
  BadRamp,
  NonPositiveDepth,
  SingularWeight,
  NotSubcritical,
  BadPenalty,
  ShapeMismatch,
  NonFinite,
  NoRoot,
  DimensionTooLarge,
  NoConvergence,
  NonSquareGrid,
  RunnerFailure,
  ConfigInvalid,
  IoError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace swe
