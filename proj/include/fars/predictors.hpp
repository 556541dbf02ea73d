#pragma once

#include "fars/model.hpp"

namespace fars {

enum class PredictorKind { regression, bartlett, mcdonald, custom };

const char* to_string(PredictorKind kind);

// Weight matrix B of a factor score predictor f_hat = B' * x.
struct PredictorWeights {
  Matrix b; // p x q
  PredictorKind kind = PredictorKind::custom;
};

// B = sigma^-1 * lambda * phi. The score vector with the highest correlation
// with each factor.
PredictorWeights regression_weights(const FactorModel& model,
                                    const CovarianceMatrix& sigma);

// B = psi^-2 * lambda * (lambda' psi^-2 lambda)^-1; conditionally unbiased,
// lambda' * B = I.
PredictorWeights bartlett_weights(const FactorModel& model);

// B = psi^-2 * lambda * N * (N' lambda' psi^-2 sigma psi^-2 lambda N)^{-1/2}
// with N = phi_root(phi); normalized so B' * sigma * B = I.
// With correlation_preserving set, B is post-multiplied by N' so the scores
// have covariance phi instead; that variant is invariant to the root choice.
PredictorWeights mcdonald_weights(const FactorModel& model,
                                  const CovarianceMatrix& sigma,
                                  bool correlation_preserving = false);

// Applies weights row-wise: output row i = B' * (data row i).
Matrix predict_scores(const PredictorWeights& weights, const Matrix& data);

} // namespace fars
