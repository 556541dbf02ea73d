#pragma once

#include <string>
#include <vector>

#include "fars/types.hpp"

namespace fars {

// Factor model on standardized variables: x = lambda*f + e with cor(f) = phi,
// var(e) = diag(psi2). Invariants: phi symmetric positive definite with unit
// diagonal; psi2 > 0 elementwise; diag(lambda*phi*lambda') + psi2 = 1 within
// 1e-10; p >= q >= 1.
struct FactorModel {
  Matrix lambda; // p x q loading pattern
  Matrix phi;    // q x q factor correlations
  Vector psi2;   // length-p unique variances

  Index p() const { return lambda.rows(); }
  Index q() const { return lambda.cols(); }
};

enum class CovKind { population, model_implied, sample };

const char* to_string(CovKind kind);

// Symmetric positive-definite covariance matrix. population and model_implied
// kinds additionally carry a unit diagonal (within 1e-10).
struct CovarianceMatrix {
  Matrix sigma;
  CovKind kind = CovKind::model_implied;
};

// A violated model invariant, reported as data rather than thrown.
struct Violation {
  std::string invariant; // stable machine-readable name
  Index index;           // offending row/column, -1 for whole-matrix checks
  double magnitude;      // measured slack
  std::string message;
};

// Returns every violated FactorModel invariant; empty means valid.
std::vector<Violation> validate_model(const FactorModel& model);

// diag(lambda * phi * lambda').
Vector communalities(const FactorModel& model);

// Builds a standardized model from a loading pattern and factor correlations,
// deriving psi2 = 1 - communalities.
FactorModel standardized_from_pattern(Matrix lambda, Matrix phi);

// Sigma = lambda*phi*lambda' + diag(psi2). For standardized models the
// diagonal is exactly 1. Raises NonPositiveDefinite when an eigenvalue
// is <= 1e-12 (inadmissible loading/correlation combination).
CovarianceMatrix reconstruct_sigma(const FactorModel& model);

} // namespace fars
