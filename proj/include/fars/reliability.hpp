#pragma once

#include "fars/predictors.hpp"

namespace fars {

// Premise/conclusion measurements for the equality and lower-bound checks.
// Never asserts; callers decide what to do with the measured slacks.
struct TheoremFlags {
  bool premise_orthogonal = false;        // ||phi - I||_inf <= 1e-10
  double orthogonal_slack = 0.0;          // measured ||phi - I||_inf
  bool premise_diagonal_information = false; // offdiag(lambda' sigma^-1 lambda) small
  double information_offdiag = 0.0;       // max |offdiag| of lambda' sigma^-1 lambda

  double gap_regression_bartlett = 0.0;   // ||R_reg - R_bartlett||_inf
  double gap_regression_mcdonald = 0.0;   // ||R_reg - R_mcdonald||_inf
  double min_regression_minus_determinacy_sq = 0.0;

  // Both premises => the two reliability equalities are expected within tol.
  bool premises_hold() const {
    return premise_orthogonal && premise_diagonal_information;
  }
};

// Per-factor reliabilities and determinacy, raw (unclamped) values; clamping
// to [0,1] happens only when reports are serialized.
struct ReliabilityReport {
  Vector regression;
  Vector bartlett;
  Vector mcdonald;
  Vector determinacy;
  TheoremFlags flags;
};

// Equivalent-item reliability of arbitrary weights B: with D = diag(B' sigma B),
// returns diag(D^{-1/2} B' lambda phi lambda' B D^{-1/2}). Unique variance never
// counts as reliable.
Vector reliability_generic(const PredictorWeights& weights,
                           const FactorModel& model,
                           const CovarianceMatrix& sigma);

// Closed forms for the three predictors (algebraic specializations of
// reliability_generic applied to the matching weights).
Vector reliability_regression(const FactorModel& model,
                              const CovarianceMatrix& sigma);
Vector reliability_bartlett(const FactorModel& model);
Vector reliability_mcdonald(const FactorModel& model,
                            const CovarianceMatrix& sigma);

// diag(phi lambda' sigma^-1 lambda phi)^{1/2}: correlation between the
// regression predictor and its factor.
Vector determinacy(const FactorModel& model, const CovarianceMatrix& sigma);

// Sum-score reliability of p parallel items with uniform correlation rho:
// p*rho / (1 + (p-1)*rho).
double kr_parallel(int p, double rho);

// Measures the equality/lower-bound premises and conclusions for a model.
TheoremFlags theorem_report(const FactorModel& model,
                            const CovarianceMatrix& sigma);

// Convenience: builds sigma via reconstruct_sigma and fills a full report.
ReliabilityReport reliability_report(const FactorModel& model);

} // namespace fars
