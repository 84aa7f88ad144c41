#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kvw {

enum class ErrorCode {
  NotSquare,
  NotSymmetric,
  NegativeEntry,
  NotPositiveDefinite,
  MixedParity,
  NonPositiveU,
  NotEigenvectorOfE,
  NonPositiveCounts,
  NonconvergentModulus,
  AsymmetricOmega,
  ImagNotPositiveDefinite,
  NonCyclicBasisOrder,
  IndexOutOfRange,
  ShapeMismatch,
  QuadratureTooCoarse,
  SamplingBudgetExceeded,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Structured rejection carried by every fallible operation in the library.
// `what()` is "<Code>: <detail>", so the code name survives any re-throw as text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kvw
