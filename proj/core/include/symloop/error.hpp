#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symloop {

enum class ErrorCode {
  NonUnitModulus,
  WindowOverflow,
  IncompatibleSampling,
  NotPowerOfLambdaK,
  SingularLoop,
  WrongMultiplicity,
  NonUnitaryResult,
  FactorizationFailed,
  DimensionMismatch,
  NotKSymmetric,
  NotRootOfIdentity,
  TwistRemovalFailed,
  NotKSymmetricSubspace,
  NotNested,
  NotTwisted,
  GridTooCoarse,
  StepTooLarge,
  LambdaMinusTwoLeak,
  RankUnstable,
  NotNilconformal,
  ParameterOutOfRange,
  NotFull,
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `measure()` carries the offending
// quantity (a residual, a norm, a sample index) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double measure = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        measure_(measure) {}

  ErrorCode code() const noexcept { return code_; }
  double measure() const noexcept { return measure_; }

 private:
  ErrorCode code_;
  double measure_;
};

}  // namespace symloop
