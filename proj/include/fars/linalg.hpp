#pragma once

#include "fars/types.hpp"

namespace fars {

// Tolerance ladder used throughout: 1e-12 for plain algebraic identities,
// 1e-10 for identities routed through matrix roots or inverses, 1e-8 for
// premise predicates on near-diagonal matrices.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kRootTol = 1e-10;
inline constexpr double kPremiseTol = 1e-8;

// Eigenvalues above this count as positive; below its negation they are
// treated as genuinely negative rather than round-off.
inline constexpr double kEigClamp = 1e-12;

// Symmetric PSD square root: returns symmetric S with S*S = m.
// Eigenvalues in [-kEigClamp, 0) are clamped to 0; anything lower raises
// NegativeEigenvalue. Asymmetry beyond 1e-10 raises NotSymmetric.
Matrix sym_sqrt_pd(const Matrix& m);

// Inverse of the symmetric square root; requires strictly positive eigenvalues.
Matrix sym_inv_sqrt_pd(const Matrix& m);

// Root N of a factor correlation matrix with N*N' = phi. Returns the symmetric
// root U*D^{1/2}*U'. Any N*Q with Q orthogonal satisfies the defining product;
// the symmetric choice is pinned because downstream per-factor quantities are
// not invariant to Q (only signed permutations and traces are).
Matrix phi_root(const Matrix& phi);

// Ratio of extreme singular values; large values signal rank deficiency.
double condition_number(const Matrix& m);

// max |a - b| over entries.
double max_abs_diff(const Matrix& a, const Matrix& b);

} // namespace fars
