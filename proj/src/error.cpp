#include "fars/error.hpp"

namespace fars {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NegativeEigenvalue: return "NegativeEigenvalue";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NonPositiveDefinite: return "NonPositiveDefinite";
    case ErrorCode::SingularSigma: return "SingularSigma";
    case ErrorCode::RankDeficientLoadings: return "RankDeficientLoadings";
    case ErrorCode::InnerMatrixNotPD: return "InnerMatrixNotPD";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroPredictorVariance: return "ZeroPredictorVariance";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::TooManyFactors: return "TooManyFactors";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::SingularTarget: return "SingularTarget";
    case ErrorCode::InadmissibleCondition: return "InadmissibleCondition";
    case ErrorCode::InadmissiblePerturbation: return "InadmissiblePerturbation";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& msg)
    : std::runtime_error(std::string(to_string(code)) + ": " + msg), code_(code) {}

void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

} // namespace fars
