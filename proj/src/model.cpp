#include "fars/model.hpp"

#include <cmath>

#include "fars/error.hpp"
#include "fars/linalg.hpp"

namespace fars {

const char* to_string(CovKind kind) {
  switch (kind) {
    case CovKind::population: return "population";
    case CovKind::model_implied: return "model-implied";
    case CovKind::sample: return "sample";
  }
  return "unknown";
}

std::vector<Violation> validate_model(const FactorModel& model) {
  std::vector<Violation> out;
  const Index p = model.p();
  const Index q = model.q();

  if (q < 1 || p < q) {
    out.push_back({"dimensions", -1, double(p - q),
                   "requires p >= q >= 1, got p=" + std::to_string(p) +
                       " q=" + std::to_string(q)});
    return out; // nothing below is meaningful with broken shapes
  }
  if (model.phi.rows() != q || model.phi.cols() != q) {
    out.push_back({"phi_shape", -1, 0.0,
                   "phi must be q x q with q=" + std::to_string(q)});
    return out;
  }
  if (model.psi2.size() != p) {
    out.push_back({"psi2_shape", -1, 0.0,
                   "psi2 must have length p=" + std::to_string(p)});
    return out;
  }

  const double asym = (model.phi - model.phi.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    out.push_back({"phi_symmetric", -1, asym,
                   "phi asymmetry " + std::to_string(asym)});
  }
  for (Index i = 0; i < q; ++i) {
    const double d = std::abs(model.phi(i, i) - 1.0);
    if (d > 0.0) {
      out.push_back({"phi_unit_diagonal", i, d,
                     "phi(" + std::to_string(i) + "," + std::to_string(i) +
                         ") = " + std::to_string(model.phi(i, i))});
    }
  }
  if (asym <= 1e-10) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(model.phi);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin <= kEigClamp) {
      out.push_back({"phi_positive_definite", -1, lmin,
                     "smallest phi eigenvalue " + std::to_string(lmin)});
    }
  }
  for (Index j = 0; j < p; ++j) {
    if (!(model.psi2[j] > 0.0)) {
      out.push_back({"psi2_positive", j, model.psi2[j],
                     "psi2[" + std::to_string(j) + "] = " +
                         std::to_string(model.psi2[j])});
    }
  }

  // Standardized-variable convention: communality + uniqueness = 1 per item.
  // Non-standardized models are rejected rather than silently rescaled.
  const Vector comm = communalities(model);
  for (Index j = 0; j < p; ++j) {
    const double slack = std::abs(comm[j] + model.psi2[j] - 1.0);
    if (slack > 1e-10) {
      out.push_back({"standardized", j, slack,
                     "communality + psi2 = " +
                         std::to_string(comm[j] + model.psi2[j]) + " for item " +
                         std::to_string(j)});
    }
  }
  return out;
}

Vector communalities(const FactorModel& model) {
  return ((model.lambda * model.phi).cwiseProduct(model.lambda)).rowwise().sum();
}

FactorModel standardized_from_pattern(Matrix lambda, Matrix phi) {
  FactorModel m;
  m.lambda = std::move(lambda);
  m.phi = std::move(phi);
  m.psi2 = Vector::Ones(m.p()) - communalities(m);
  return m;
}

CovarianceMatrix reconstruct_sigma(const FactorModel& model) {
  Matrix sigma = model.lambda * model.phi * model.lambda.transpose();
  sigma += Matrix(model.psi2.asDiagonal());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin <= kEigClamp) {
    raise(ErrorCode::NonPositiveDefinite,
          "reconstructed covariance has eigenvalue " + std::to_string(lmin));
  }
  return {std::move(sigma), CovKind::model_implied};
}

} // namespace fars
