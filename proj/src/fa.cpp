#include "fars/fa.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fars/error.hpp"
#include "fars/linalg.hpp"

namespace fars {

namespace {

// ---- profiled ML objective ------------------------------------------------

struct MlEval {
  double f = 0.0;
  Vector grad_t;      // gradient wrt t = log psi2
  Matrix lambda;      // loadings at this psi2 (original metric)
};

// Eigenvalues of psi^-1 S psi^-1 split the fit: the top q carry the common
// part, the rest measure misfit. F = sum_{j>q} (theta_j - log theta_j - 1).
MlEval ml_eval(const Matrix& s, const Vector& psi2, Index q) {
  const Index p = s.rows();
  const Vector inv_sd = psi2.cwiseSqrt().cwiseInverse();
  const Matrix sstar = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(sstar);
  const Vector theta = es.eigenvalues(); // ascending
  const Matrix& u = es.eigenvectors();

  MlEval out;
  for (Index j = 0; j < p - q; ++j) {
    const double th = std::max(theta[j], 1e-300);
    out.f += th - std::log(th) - 1.0;
  }

  // Scaled loadings from the top q eigenpairs (ascending order: last q).
  Matrix lstar(p, q);
  for (Index k = 0; k < q; ++k) {
    const Index idx = p - 1 - k;
    const double w = std::sqrt(std::max(theta[idx] - 1.0, 0.0));
    lstar.col(k) = u.col(idx) * w;
  }
  const Vector sd = psi2.cwiseSqrt();
  out.lambda = sd.asDiagonal() * lstar;

  // d F / d psi2_j = (sigma_hat_jj - s_jj) / psi2_j^2; chain rule to t gives
  // (sigma_hat_jj - s_jj) / psi2_j with sigma_hat_jj = psi2_j (1 + ||lstar_j||^2).
  out.grad_t = Vector(p);
  for (Index j = 0; j < p; ++j) {
    const double sigma_jj = psi2[j] * (1.0 + lstar.row(j).squaredNorm());
    out.grad_t[j] = (sigma_jj - s(j, j)) / psi2[j];
  }
  return out;
}

Vector project_box(Vector t, const Vector& lo, const Vector& hi) {
  return t.cwiseMax(lo).cwiseMin(hi);
}

// Gradient components pointing out of the active box faces are zeroed.
Vector projected_gradient(const Vector& g, const Vector& t, const Vector& lo,
                          const Vector& hi) {
  Vector pg = g;
  for (Index j = 0; j < g.size(); ++j) {
    if (t[j] <= lo[j] + 1e-12 && g[j] > 0.0) pg[j] = 0.0;
    if (t[j] >= hi[j] - 1e-12 && g[j] < 0.0) pg[j] = 0.0;
  }
  return pg;
}

// Deterministic column signs: largest-|entry| coefficient positive.
void canonical_signs(Matrix& lambda) {
  for (Index k = 0; k < lambda.cols(); ++k) {
    Index imax = 0;
    lambda.col(k).cwiseAbs().maxCoeff(&imax);
    if (lambda(imax, k) < 0.0) lambda.col(k) = -lambda.col(k);
  }
}

} // namespace

ExtractionResult ml_extract(const CovarianceMatrix& s, Index q,
                            const MlOptions& opts) {
  const Index p = s.sigma.rows();
  if (q < 1 || q >= p) {
    raise(ErrorCode::TooManyFactors,
          "q must satisfy 0 < q < p, got q=" + std::to_string(q) +
              " p=" + std::to_string(p));
  }
  const Index df = ((p - q) * (p - q) - (p + q)) / 2;
  if (df < 0) {
    raise(ErrorCode::TooManyFactors,
          "negative degrees of freedom for q=" + std::to_string(q));
  }
  Eigen::LLT<Matrix> llt(s.sigma);
  if (llt.info() != Eigen::Success) {
    raise(ErrorCode::NotPositiveDefinite, "input covariance not PD");
  }

  // Start at the anti-image variances (one minus squared multiple correlation,
  // in the input's metric); box: psi2_j in [floor * s_jj, s_jj].
  const Matrix s_inv = llt.solve(Matrix::Identity(p, p));
  Vector lo(p), hi(p), t(p);
  for (Index j = 0; j < p; ++j) {
    lo[j] = std::log(opts.psi_floor_frac * s.sigma(j, j));
    hi[j] = std::log(s.sigma(j, j));
    t[j] = std::log(1.0 / s_inv(j, j));
  }
  t = project_box(std::move(t), lo, hi);

  Vector psi2 = t.array().exp();
  MlEval cur = ml_eval(s.sigma, psi2, q);

  // L-BFGS memory.
  const int memory = 8;
  std::vector<Vector> s_hist, y_hist;
  std::vector<double> rho_hist;

  bool converged = false;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    // Two-loop recursion.
    Vector d = -cur.grad_t;
    if (!s_hist.empty()) {
      std::vector<double> alpha(s_hist.size());
      for (int i = int(s_hist.size()) - 1; i >= 0; --i) {
        alpha[i] = rho_hist[i] * s_hist[i].dot(d);
        d -= alpha[i] * y_hist[i];
      }
      const Vector& sl = s_hist.back();
      const Vector& yl = y_hist.back();
      d *= sl.dot(yl) / yl.dot(yl);
      for (std::size_t i = 0; i < s_hist.size(); ++i) {
        const double beta = rho_hist[i] * y_hist[i].dot(d);
        d += (alpha[i] - beta) * s_hist[i];
      }
    }
    if (cur.grad_t.dot(d) >= 0.0) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -cur.grad_t;
    }

    // Backtracking on the projected path.
    double step = 1.0;
    bool accepted = false;
    Vector t_next, psi2_next;
    MlEval next;
    for (int bt = 0; bt < 40; ++bt) {
      t_next = project_box(t + step * d, lo, hi);
      const Vector dt = t_next - t;
      if (dt.lpNorm<Eigen::Infinity>() < 1e-15) break;
      psi2_next = t_next.array().exp();
      next = ml_eval(s.sigma, psi2_next, q);
      const double slope = cur.grad_t.dot(dt);
      if (slope < 0.0 && next.f <= cur.f + 1e-4 * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No improving step exists along this direction; the measured state
      // decides the flag.
      const Vector pg = projected_gradient(cur.grad_t, t, lo, hi);
      converged = pg.lpNorm<Eigen::Infinity>() < opts.grad_tol;
      break;
    }

    const Vector step_s = t_next - t;
    const Vector step_y = next.grad_t - cur.grad_t;
    const double ys = step_y.dot(step_s);
    if (ys > 1e-12 * step_s.norm() * step_y.norm()) {
      s_hist.push_back(step_s);
      y_hist.push_back(step_y);
      rho_hist.push_back(1.0 / ys);
      if (int(s_hist.size()) > memory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }

    const double psi_change = (psi2_next - psi2).lpNorm<Eigen::Infinity>();
    t = std::move(t_next);
    psi2 = std::move(psi2_next);
    cur = std::move(next);

    const Vector pg_new = projected_gradient(cur.grad_t, t, lo, hi);
    if (psi_change < opts.psi_change_tol &&
        pg_new.lpNorm<Eigen::Infinity>() < opts.grad_tol) {
      converged = true;
      ++iter;
      break;
    }
  }

  if (!converged && opts.require_convergence) {
    raise(ErrorCode::NoConvergence,
          "no convergence in " + std::to_string(opts.max_iterations) +
              " iterations");
  }

  ExtractionResult result;
  result.converged = converged;
  result.iterations = iter;
  result.discrepancy = std::max(cur.f, 0.0);
  for (Index j = 0; j < p; ++j) {
    if (t[j] <= lo[j] + 1e-9) result.heywood_adjusted = true;
  }
  Matrix lambda = cur.lambda;
  canonical_signs(lambda);
  result.model.lambda = std::move(lambda);
  result.model.phi = Matrix::Identity(q, q);
  result.model.psi2 = psi2;
  return result;
}

// ---- rotations --------------------------------------------------------------

double varimax_criterion(const Matrix& lambda) {
  const double p = double(lambda.rows());
  double v = 0.0;
  for (Index k = 0; k < lambda.cols(); ++k) {
    const Vector sq = lambda.col(k).cwiseAbs2();
    v += sq.cwiseAbs2().sum() - sq.sum() * sq.sum() / p;
  }
  return v;
}

Rotation varimax(const Matrix& lambda, bool kaiser_normalize) {
  const Index p = lambda.rows();
  const Index q = lambda.cols();
  Rotation out{lambda, Matrix::Identity(q, q)};
  if (q == 1) return out;

  Matrix x = lambda;
  Vector h = Vector::Ones(p);
  if (kaiser_normalize) {
    h = x.rowwise().norm();
    for (Index j = 0; j < p; ++j) {
      if (h[j] > 1e-12) x.row(j) /= h[j];
    }
  }

  Matrix t = Matrix::Identity(q, q);
  double crit = varimax_criterion(x);
  for (int sweep = 0; sweep < 100; ++sweep) {
    for (Index k = 0; k < q - 1; ++k) {
      for (Index l = k + 1; l < q; ++l) {
        const Vector xk = x.col(k);
        const Vector xl = x.col(l);
        const Vector u = xk.cwiseAbs2() - xl.cwiseAbs2();
        const Vector v = 2.0 * xk.cwiseProduct(xl);
        const double a = u.sum();
        const double b = v.sum();
        const double c = (u.cwiseAbs2() - v.cwiseAbs2()).sum();
        const double d = 2.0 * u.dot(v);
        const double num = d - 2.0 * a * b / double(p);
        const double den = c - (a * a - b * b) / double(p);
        const double angle = 0.25 * std::atan2(num, den);
        if (std::abs(angle) < 1e-12) continue;
        const double cs = std::cos(angle);
        const double sn = std::sin(angle);
        x.col(k) = cs * xk + sn * xl;
        x.col(l) = -sn * xk + cs * xl;
        const Vector tk = t.col(k);
        const Vector tl = t.col(l);
        t.col(k) = cs * tk + sn * tl;
        t.col(l) = -sn * tk + cs * tl;
      }
    }
    const double crit_next = varimax_criterion(x);
    if (crit_next - crit < 1e-8) break;
    crit = crit_next;
  }

  out.rotation = t;
  out.loadings = lambda * t;
  return out;
}

ObliqueRotation promax(const Matrix& lambda, int kappa) {
  const Index q = lambda.cols();
  if (q == 1) return {lambda, Matrix::Ones(1, 1)};

  const Rotation vm = varimax(lambda, true);
  const Matrix& x = vm.loadings;

  // Power target keeps signs, sharpens simple structure.
  Matrix target(x.rows(), q);
  for (Index j = 0; j < x.rows(); ++j) {
    for (Index k = 0; k < q; ++k) {
      target(j, k) = x(j, k) * std::pow(std::abs(x(j, k)), kappa - 1);
    }
  }

  const Matrix xtx = x.transpose() * x;
  Eigen::FullPivLU<Matrix> lu(xtx);
  if (!lu.isInvertible()) {
    raise(ErrorCode::SingularTarget, "varimax loadings have collinear columns");
  }
  Matrix u = lu.solve(x.transpose() * target);

  Eigen::FullPivLU<Matrix> lu_u(u.transpose() * u);
  if (!lu_u.isInvertible()) {
    raise(ErrorCode::SingularTarget, "oblique transform not invertible");
  }
  const Vector d = lu_u.inverse().diagonal();
  if (d.minCoeff() <= 0.0) {
    raise(ErrorCode::SingularTarget, "oblique transform degenerate");
  }
  u = u * d.cwiseSqrt().asDiagonal();

  ObliqueRotation out;
  out.pattern = x * u;
  const Matrix uinv = u.inverse();
  out.phi = uinv * uinv.transpose();
  out.phi = 0.5 * (out.phi + out.phi.transpose());
  out.phi.diagonal().setOnes(); // unit by construction; pin it exactly
  return out;
}

// ---- alignment --------------------------------------------------------------

Matrix congruence_matrix(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    raise(ErrorCode::DimensionMismatch, "congruence needs equal row counts");
  }
  Matrix c(a.cols(), b.cols());
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index k = 0; k < b.cols(); ++k) {
      const double na = a.col(j).norm();
      const double nb = b.col(k).norm();
      c(j, k) = (na > 1e-12 && nb > 1e-12) ? a.col(j).dot(b.col(k)) / (na * nb)
                                           : 0.0;
    }
  }
  return c;
}

FactorModel align_to_target(const FactorModel& estimated,
                            const FactorModel& target) {
  if (estimated.p() != target.p() || estimated.q() != target.q()) {
    raise(ErrorCode::DimensionMismatch, "aligned models must share p and q");
  }
  const Index q = estimated.q();
  const Matrix c = congruence_matrix(estimated.lambda, target.lambda);

  std::vector<Index> source(q, -1); // source[k]: estimated column mapped to target k
  std::vector<double> sign(q, 1.0);
  std::vector<bool> row_used(q, false), col_used(q, false);
  for (Index step = 0; step < q; ++step) {
    double best = -1.0;
    Index bj = -1, bk = -1;
    for (Index j = 0; j < q; ++j) {
      if (row_used[j]) continue;
      for (Index k = 0; k < q; ++k) {
        if (col_used[k]) continue;
        if (std::abs(c(j, k)) > best) { // strict: ties keep the lowest indices
          best = std::abs(c(j, k));
          bj = j;
          bk = k;
        }
      }
    }
    row_used[bj] = true;
    col_used[bk] = true;
    source[bk] = bj;
    sign[bk] = c(bj, bk) < 0.0 ? -1.0 : 1.0;
  }

  FactorModel out;
  out.lambda.resize(estimated.p(), q);
  out.phi.resize(q, q);
  out.psi2 = estimated.psi2;
  for (Index k = 0; k < q; ++k) {
    out.lambda.col(k) = sign[k] * estimated.lambda.col(source[k]);
  }
  for (Index k = 0; k < q; ++k) {
    for (Index l = 0; l < q; ++l) {
      out.phi(k, l) = sign[k] * sign[l] * estimated.phi(source[k], source[l]);
    }
  }
  return out;
}

// ---- sample moments ---------------------------------------------------------

CovarianceMatrix sample_covariance(const Matrix& data) {
  const Index n = data.rows();
  if (n < 2) {
    raise(ErrorCode::ZeroVariance, "need at least two rows");
  }
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Matrix centered = data.rowwise() - mean;
  Matrix cov = centered.transpose() * centered / double(n - 1);
  for (Index j = 0; j < cov.cols(); ++j) {
    if (!(cov(j, j) > 0.0)) {
      raise(ErrorCode::ZeroVariance, "column " + std::to_string(j));
    }
  }
  return {std::move(cov), CovKind::sample};
}

CovarianceMatrix sample_correlation(const Matrix& data) {
  CovarianceMatrix cov = sample_covariance(data);
  const Vector inv_sd = cov.sigma.diagonal().cwiseSqrt().cwiseInverse();
  cov.sigma = inv_sd.asDiagonal() * cov.sigma * inv_sd.asDiagonal();
  cov.sigma.diagonal().setOnes();
  return cov;
}

} // namespace fars
