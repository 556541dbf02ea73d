#pragma once

#include "fars/model.hpp"

namespace fars {

struct MlOptions {
  int max_iterations = 500;
  double psi_change_tol = 1e-6;  // converged: max |delta psi2| below this ...
  double grad_tol = 1e-5;        // ... and projected-gradient inf norm below this
  double psi_floor_frac = 0.005; // lower bound on psi2_j as a fraction of s_jj
  bool require_convergence = false; // throw NoConvergence instead of flagging
};

// Maximum-likelihood extraction result. The model is the canonical
// (unrotated, orthogonal) solution: phi = I, sigma_hat = lambda lambda' +
// diag(psi2). discrepancy is the profiled ML fit value (>= 0, 0 at exact fit).
struct ExtractionResult {
  FactorModel model;
  bool converged = false;
  int iterations = 0;
  bool heywood_adjusted = false; // some psi2 pinned at the floor
  double discrepancy = 0.0;
};

// Profiled ML factor extraction: minimizes the ML discrepancy over
// uniquenesses (quasi-Newton on log psi2 with box bounds), recovering
// loadings from the leading eigenstructure of psi^-1 S psi^-1.
// Raises TooManyFactors when the model degrees of freedom are negative,
// NotPositiveDefinite when s is not PD.
ExtractionResult ml_extract(const CovarianceMatrix& s, Index q,
                            const MlOptions& opts = {});

struct Rotation {
  Matrix loadings; // lambda * t
  Matrix rotation; // orthogonal t
};

// Pairwise (Kaiser) varimax. kaiser_normalize scales rows to unit length
// during optimization. Stops when the criterion improves by less than 1e-8.
Rotation varimax(const Matrix& lambda, bool kaiser_normalize = true);

// Raw varimax criterion (column-variance of squared loadings, summed).
double varimax_criterion(const Matrix& lambda);

struct ObliqueRotation {
  Matrix pattern; // p x q
  Matrix phi;     // q x q, unit diagonal, positive definite
};

// Promax: varimax followed by an oblique least-squares fit to the
// |loading|^kappa target; pattern * phi * pattern' reproduces the varimax
// common part exactly. q = 1 returns the input with phi = [1].
ObliqueRotation promax(const Matrix& lambda, int kappa = 4);

// Tucker congruence (column cosine) matrix: entry (j, k) compares column j of
// a with column k of b.
Matrix congruence_matrix(const Matrix& a, const Matrix& b);

// Permutes and sign-flips the estimated model's factors to best match the
// target (greedy assignment on |congruence|, ties to the lowest column
// index), adjusting phi consistently. psi2 is untouched.
FactorModel align_to_target(const FactorModel& estimated,
                            const FactorModel& target);

// Unbiased covariance (divisor n-1). Raises ZeroVariance naming the first
// degenerate column.
CovarianceMatrix sample_covariance(const Matrix& data);

// Covariance rescaled to unit diagonal.
CovarianceMatrix sample_correlation(const Matrix& data);

} // namespace fars
