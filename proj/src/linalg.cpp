#include "fars/linalg.hpp"

#include <cmath>
#include <string>

#include "fars/error.hpp"

namespace fars {

namespace {

void require_square_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    raise(ErrorCode::NotSymmetric, std::string(what) + " is not square");
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    raise(ErrorCode::NotSymmetric,
          std::string(what) + " asymmetry " + std::to_string(asym));
  }
}

} // namespace

Matrix sym_sqrt_pd(const Matrix& m) {
  require_square_symmetric(m, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Vector d = es.eigenvalues();
  for (Index i = 0; i < d.size(); ++i) {
    if (d[i] < -kEigClamp) {
      raise(ErrorCode::NegativeEigenvalue,
            "eigenvalue " + std::to_string(d[i]) + " at index " + std::to_string(i));
    }
    d[i] = d[i] > 0.0 ? std::sqrt(d[i]) : 0.0;
  }
  const Matrix& u = es.eigenvectors();
  return u * d.asDiagonal() * u.transpose();
}

Matrix sym_inv_sqrt_pd(const Matrix& m) {
  require_square_symmetric(m, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Vector d = es.eigenvalues();
  for (Index i = 0; i < d.size(); ++i) {
    if (d[i] <= kEigClamp) {
      raise(ErrorCode::InnerMatrixNotPD,
            "eigenvalue " + std::to_string(d[i]) + " at index " + std::to_string(i));
    }
    d[i] = 1.0 / std::sqrt(d[i]);
  }
  const Matrix& u = es.eigenvectors();
  return u * d.asDiagonal() * u.transpose();
}

Matrix phi_root(const Matrix& phi) {
  require_square_symmetric(phi, "phi");
  Eigen::SelfAdjointEigenSolver<Matrix> es(phi);
  if (es.eigenvalues().minCoeff() <= kEigClamp) {
    raise(ErrorCode::NotPositiveDefinite,
          "smallest eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  Vector d = es.eigenvalues().cwiseSqrt();
  const Matrix& u = es.eigenvectors();
  return u * d.asDiagonal() * u.transpose();
}

double condition_number(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s[s.size() - 1];
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

} // namespace fars
