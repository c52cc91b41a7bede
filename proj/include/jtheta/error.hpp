#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jtheta {

enum class ErrorCode {
  kNotSymmetric = 1,
  kOddDiagonal,
  kNotPositiveDefinite,
  kOddRank,
  kDimensionMismatch,
  kLinearlyDependent,
  kUndefined,
  kZeroArgument,
  kNonUnitValue,
  kOverflow,
  kRadiusTooLarge,
  kInadmissibleResidue,
  kNonconvergentInput,
  kTruncationFailure,
  kOutOfRange,
  kIndexOutOfRange,
  kSingularGram,
  kNotUnimodular,
  kNotCongruent,
  kInadmissibleSpec,
  kHypothesisViolation,
  kNegativeD,
  kIllConditionedFit,
  kInvalidArgument,
};

// Stable identifier used in reports and by the C API ("OddDiagonal", ...).
std::string_view error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace jtheta
