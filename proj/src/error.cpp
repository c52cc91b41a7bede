#include "jtheta/error.hpp"

namespace jtheta {

std::string_view error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kOddDiagonal: return "OddDiagonal";
    case ErrorCode::kNotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::kOddRank: return "OddRank";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLinearlyDependent: return "LinearlyDependent";
    case ErrorCode::kUndefined: return "Undefined";
    case ErrorCode::kZeroArgument: return "ZeroArgument";
    case ErrorCode::kNonUnitValue: return "NonUnitValue";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kRadiusTooLarge: return "RadiusTooLarge";
    case ErrorCode::kInadmissibleResidue: return "InadmissibleResidue";
    case ErrorCode::kNonconvergentInput: return "NonconvergentInput";
    case ErrorCode::kTruncationFailure: return "TruncationFailure";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kSingularGram: return "SingularGram";
    case ErrorCode::kNotUnimodular: return "NotUnimodular";
    case ErrorCode::kNotCongruent: return "NotCongruent";
    case ErrorCode::kInadmissibleSpec: return "InadmissibleSpec";
    case ErrorCode::kHypothesisViolation: return "HypothesisViolation";
    case ErrorCode::kNegativeD: return "NegativeD";
    case ErrorCode::kIllConditionedFit: return "IllConditionedFit";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace jtheta
