#include "fars/predictors.hpp"

#include <string>

#include "fars/error.hpp"
#include "fars/linalg.hpp"

namespace fars {

namespace {

constexpr double kCondLimit = 1e12; // structural rank deficiency threshold

void require_dims(const FactorModel& model, const CovarianceMatrix& sigma) {
  if (sigma.sigma.rows() != model.p() || sigma.sigma.cols() != model.p()) {
    raise(ErrorCode::DimensionMismatch,
          "sigma is " + std::to_string(sigma.sigma.rows()) + "x" +
              std::to_string(sigma.sigma.cols()) + ", model has p=" +
              std::to_string(model.p()));
  }
}

Matrix inv_psi2(const FactorModel& model) {
  for (Index j = 0; j < model.p(); ++j) {
    if (!(model.psi2[j] > 0.0)) {
      raise(ErrorCode::RankDeficientLoadings,
            "psi2[" + std::to_string(j) + "] not positive");
    }
  }
  return Vector(model.psi2.cwiseInverse()).asDiagonal();
}

} // namespace

const char* to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::regression: return "regression";
    case PredictorKind::bartlett: return "bartlett";
    case PredictorKind::mcdonald: return "mcdonald";
    case PredictorKind::custom: return "custom";
  }
  return "unknown";
}

PredictorWeights regression_weights(const FactorModel& model,
                                    const CovarianceMatrix& sigma) {
  require_dims(model, sigma);
  if (condition_number(sigma.sigma) > kCondLimit) {
    raise(ErrorCode::SingularSigma, "condition number exceeds 1e12");
  }
  Eigen::LLT<Matrix> llt(sigma.sigma);
  if (llt.info() != Eigen::Success) {
    raise(ErrorCode::SingularSigma, "covariance not positive definite");
  }
  return {llt.solve(model.lambda * model.phi), PredictorKind::regression};
}

PredictorWeights bartlett_weights(const FactorModel& model) {
  const Matrix p2i = inv_psi2(model);
  const Matrix g = model.lambda.transpose() * p2i * model.lambda;
  if (condition_number(g) > kCondLimit) {
    raise(ErrorCode::RankDeficientLoadings,
          "lambda' psi^-2 lambda condition number exceeds 1e12");
  }
  return {p2i * model.lambda * g.inverse(), PredictorKind::bartlett};
}

PredictorWeights mcdonald_weights(const FactorModel& model,
                                  const CovarianceMatrix& sigma,
                                  bool correlation_preserving) {
  require_dims(model, sigma);
  const Matrix p2i = inv_psi2(model);
  const Matrix n = phi_root(model.phi);
  const Matrix core = p2i * model.lambda * n;
  const Matrix inner = core.transpose() * sigma.sigma * core;
  Matrix b = core * sym_inv_sqrt_pd(inner); // raises InnerMatrixNotPD
  if (correlation_preserving) b = b * n.transpose();
  return {std::move(b), PredictorKind::mcdonald};
}

Matrix predict_scores(const PredictorWeights& weights, const Matrix& data) {
  if (data.cols() != weights.b.rows()) {
    raise(ErrorCode::DimensionMismatch,
          "data has " + std::to_string(data.cols()) + " columns, weights expect " +
              std::to_string(weights.b.rows()));
  }
  return data * weights.b;
}

} // namespace fars
