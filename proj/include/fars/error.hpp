#pragma once

#include <stdexcept>
#include <string>

namespace fars {

enum class ErrorCode {
  NotSymmetric,
  NegativeEigenvalue,
  NotPositiveDefinite,
  NonPositiveDefinite,
  SingularSigma,
  RankDeficientLoadings,
  InnerMatrixNotPD,
  DimensionMismatch,
  ZeroPredictorVariance,
  DegenerateDenominator,
  TooManyFactors,
  NoConvergence,
  ZeroVariance,
  SingularTarget,
  InadmissibleCondition,
  InadmissiblePerturbation,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& msg);
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& msg);

} // namespace fars
