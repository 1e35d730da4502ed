#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rplm {

enum class ErrorCode {
  kNonGridSampleSize,
  kDegenerateBinning,
  kIncompleteGrid,
  kOffGridPoint,
  kEmptyBin,
  kInsufficientBins,
  kUnknownFilter,
  kBadLength,
  kBadPrimaryLevel,
  kBadShape,
  kBadExponent,
  kShapeMismatch,
  kBadCovariance,
  kUnknownDensityValue,
  kParseError,
  kHeaderMismatch,
  kIoError,
  kUnknownKey,
  kBadValue,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rplm
