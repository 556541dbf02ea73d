#include "fars/reliability.hpp"

#include <cmath>
#include <string>

#include "fars/error.hpp"
#include "fars/linalg.hpp"

namespace fars {

namespace {

// lambda' sigma^-1 lambda, the information-style q x q core shared by the
// regression reliability and determinacy.
Matrix information_core(const FactorModel& model, const CovarianceMatrix& sigma) {
  Eigen::LLT<Matrix> llt(sigma.sigma);
  if (llt.info() != Eigen::Success) {
    raise(ErrorCode::SingularSigma, "covariance not positive definite");
  }
  return model.lambda.transpose() * llt.solve(model.lambda);
}

Matrix bartlett_information(const FactorModel& model) {
  const Matrix p2i = Vector(model.psi2.cwiseInverse()).asDiagonal();
  return model.lambda.transpose() * p2i * model.lambda;
}

} // namespace

Vector reliability_generic(const PredictorWeights& weights,
                           const FactorModel& model,
                           const CovarianceMatrix& sigma) {
  if (weights.b.rows() != model.p()) {
    raise(ErrorCode::DimensionMismatch, "weights and model disagree on p");
  }
  const Matrix common = model.lambda * model.phi * model.lambda.transpose();
  const Vector num =
      ((weights.b.transpose() * common).cwiseProduct(weights.b.transpose()))
          .rowwise()
          .sum();
  const Vector den =
      ((weights.b.transpose() * sigma.sigma).cwiseProduct(weights.b.transpose()))
          .rowwise()
          .sum();
  for (Index k = 0; k < den.size(); ++k) {
    if (!(den[k] > 0.0)) {
      raise(ErrorCode::ZeroPredictorVariance,
            "predictor variance " + std::to_string(den[k]) + " for factor " +
                std::to_string(k));
    }
  }
  return num.cwiseQuotient(den);
}

Vector reliability_regression(const FactorModel& model,
                              const CovarianceMatrix& sigma) {
  const Matrix m = information_core(model, sigma);
  const Matrix a = model.phi * m * model.phi; // diag(a) = determinacy^2
  const Vector den = a.diagonal();
  const Vector num = (a * m * model.phi).diagonal();
  for (Index k = 0; k < den.size(); ++k) {
    if (!(den[k] > 0.0)) {
      raise(ErrorCode::SingularSigma,
            "degenerate predictor variance for factor " + std::to_string(k));
    }
  }
  return num.cwiseQuotient(den);
}

Vector reliability_bartlett(const FactorModel& model) {
  const Matrix g = bartlett_information(model);
  if (condition_number(g) > 1e12) {
    raise(ErrorCode::RankDeficientLoadings,
          "lambda' psi^-2 lambda condition number exceeds 1e12");
  }
  const Matrix denom = g.inverse() + model.phi;
  return denom.diagonal().cwiseInverse();
}

Vector reliability_mcdonald(const FactorModel& model,
                            const CovarianceMatrix& sigma) {
  const Matrix n = phi_root(model.phi);
  const Matrix p2i = Vector(model.psi2.cwiseInverse()).asDiagonal();
  const Matrix core = p2i * model.lambda * n; // p x q
  const Matrix s = core.transpose() * sigma.sigma * core;
  const Matrix s_inv_root = sym_inv_sqrt_pd(s); // raises InnerMatrixNotPD
  const Matrix g = bartlett_information(model);
  const Matrix middle = n.transpose() * g * model.phi * g * n;
  return (s_inv_root * middle * s_inv_root).diagonal();
}

Vector determinacy(const FactorModel& model, const CovarianceMatrix& sigma) {
  const Matrix m = information_core(model, sigma);
  const Vector d2 = (model.phi * m * model.phi).diagonal();
  return d2.cwiseMax(0.0).cwiseSqrt();
}

double kr_parallel(int p, double rho) {
  const double denom = 1.0 + (p - 1) * rho;
  if (!(denom > 0.0)) {
    raise(ErrorCode::DegenerateDenominator,
          "1 + (p-1)*rho = " + std::to_string(denom));
  }
  return p * rho / denom;
}

TheoremFlags theorem_report(const FactorModel& model,
                            const CovarianceMatrix& sigma) {
  TheoremFlags flags;
  const Index q = model.q();

  flags.orthogonal_slack =
      (model.phi - Matrix::Identity(q, q)).cwiseAbs().maxCoeff();
  flags.premise_orthogonal = flags.orthogonal_slack <= kRootTol;

  const Matrix m = information_core(model, sigma);
  double offdiag = 0.0;
  for (Index i = 0; i < q; ++i) {
    for (Index j = 0; j < q; ++j) {
      if (i != j) offdiag = std::max(offdiag, std::abs(m(i, j)));
    }
  }
  flags.information_offdiag = offdiag;
  flags.premise_diagonal_information = offdiag < kPremiseTol;

  const Vector r_reg = reliability_regression(model, sigma);
  const Vector r_bart = reliability_bartlett(model);
  const Vector r_mcd = reliability_mcdonald(model, sigma);
  const Vector det = determinacy(model, sigma);

  flags.gap_regression_bartlett = (r_reg - r_bart).cwiseAbs().maxCoeff();
  flags.gap_regression_mcdonald = (r_reg - r_mcd).cwiseAbs().maxCoeff();
  flags.min_regression_minus_determinacy_sq =
      (r_reg - det.cwiseProduct(det)).minCoeff();
  return flags;
}

ReliabilityReport reliability_report(const FactorModel& model) {
  const CovarianceMatrix sigma = reconstruct_sigma(model);
  ReliabilityReport report;
  report.regression = reliability_regression(model, sigma);
  report.bartlett = reliability_bartlett(model);
  report.mcdonald = reliability_mcdonald(model, sigma);
  report.determinacy = determinacy(model, sigma);
  report.flags = theorem_report(model, sigma);
  return report;
}

} // namespace fars
