#include "rplm/error.hpp"

namespace rplm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonGridSampleSize: return "NonGridSampleSize";
    case ErrorCode::kDegenerateBinning: return "DegenerateBinning";
    case ErrorCode::kIncompleteGrid: return "IncompleteGrid";
    case ErrorCode::kOffGridPoint: return "OffGridPoint";
    case ErrorCode::kEmptyBin: return "EmptyBin";
    case ErrorCode::kInsufficientBins: return "InsufficientBins";
    case ErrorCode::kUnknownFilter: return "UnknownFilter";
    case ErrorCode::kBadLength: return "BadLength";
    case ErrorCode::kBadPrimaryLevel: return "BadPrimaryLevel";
    case ErrorCode::kBadShape: return "BadShape";
    case ErrorCode::kBadExponent: return "BadExponent";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kBadCovariance: return "BadCovariance";
    case ErrorCode::kUnknownDensityValue: return "UnknownDensityValue";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kHeaderMismatch: return "HeaderMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kBadValue: return "BadValue";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace rplm
