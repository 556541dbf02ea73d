#include "fars/fuzz.hpp"

#include <cmath>

#include "fars/error.hpp"
#include "fars/rng.hpp"

namespace fars {

namespace {

// Random correlation matrix with max |off-diagonal| <= cap and smallest
// eigenvalue bounded away from zero: a Gram-based correlation blended with I.
Matrix bounded_correlation(Rng& rng, Index q, double cap) {
  Matrix a(q, q + 3);
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q + 3; ++j) a(i, j) = rng.normal();
  Matrix c = a * a.transpose();
  const Vector d = c.diagonal().cwiseSqrt().cwiseInverse();
  c = d.asDiagonal() * c * d.asDiagonal();
  double maxoff = 0.0;
  for (Index i = 0; i < q; ++i)
    for (Index j = 0; j < q; ++j)
      if (i != j) maxoff = std::max(maxoff, std::abs(c(i, j)));
  const double blend = maxoff > 1e-12 ? std::min(1.0, cap / maxoff) : 1.0;
  Matrix phi = (1.0 - blend) * Matrix::Identity(q, q) + blend * c;
  phi.diagonal().setOnes();
  return phi;
}

} // namespace

int fuzz_style(int index) { return index % 4; }

FactorModel fuzz_model(std::uint64_t master_seed, int index) {
  static const Index q_cycle[4] = {1, 2, 3, 6};
  const int style = fuzz_style(index);
  const Index q = q_cycle[(index / 4) % 4];
  const bool cross_loadings = (style & 1) != 0;
  const bool oblique = (style & 2) != 0 && q > 1;

  for (int attempt = 0; attempt < 64; ++attempt) {
    Rng rng(derive_seed(master_seed, std::uint64_t(index), std::uint64_t(attempt)));
    const Index per_factor = 3 + Index(rng.raw() % 6); // 3..8 items per factor
    const Index p = q * per_factor;

    Matrix lambda = Matrix::Zero(p, q);
    for (Index k = 0; k < q; ++k) {
      for (Index i = 0; i < per_factor; ++i) {
        lambda(k * per_factor + i, k) = 0.40 + 0.45 * rng.uniform();
      }
    }
    if (cross_loadings) {
      for (Index j = 0; j < p; ++j) {
        for (Index k = 0; k < q; ++k) {
          if (lambda(j, k) == 0.0) lambda(j, k) = 0.15 * (2.0 * rng.uniform() - 1.0);
        }
      }
    }

    Matrix phi = Matrix::Identity(q, q);
    if (oblique) {
      const double cap = 0.10 + 0.40 * rng.uniform();
      phi = bounded_correlation(rng, q, cap);
      Eigen::SelfAdjointEigenSolver<Matrix> es(phi);
      if (es.eigenvalues().minCoeff() < 0.05) continue;
    }

    FactorModel model = standardized_from_pattern(std::move(lambda), std::move(phi));
    if (model.psi2.minCoeff() < 0.02) continue;
    if (!validate_model(model).empty()) continue;
    return model;
  }
  raise(ErrorCode::InadmissibleCondition,
        "no admissible fuzz model for index " + std::to_string(index));
}

} // namespace fars
