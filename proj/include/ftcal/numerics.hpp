#pragma once

#include "ftcal/types.hpp"

namespace ftcal {

// sigma_max / sigma_min; +inf if the matrix is exactly rank deficient.
double conditionEstimate(const MatX& A);

// Minimizes ||Ax - b||_2 via SVD. Throws RankDeficient if cond(A) >= 1e12.
VecX leastSquares(const MatX& A, const VecX& b);

// Multi-right-hand-side variant; solves min ||AX - B||_F column-wise.
MatX leastSquares(const MatX& A, const MatX& B);

// Classical total least squares: with [A b] = U S V^T and v the last right
// singular vector, x = -v[0:n] / v[n]. Throws RankDeficient if A is rank
// deficient or the smallest singular value of [A b] is not separated from
// the next; NoTLSSolution if v[n] ~ 0.
VecX totalLeastSquares(const MatX& A, const VecX& b);

struct NullspaceResult {
  VecX vector;  // unit norm right singular vector of the smallest singular value
  double gap;   // sigma_{n-1} / sigma_n; +inf when sigma_n == 0
};

// Requires rows >= cols - 1 (missing singular values count as zeros).
// Throws AmbiguousNullspace when the two smallest singular values are closer
// than 1e-8 relative to sigma_max.
NullspaceResult nullspaceVector(const MatX& M);

// Real part of the eigenvector whose eigenvalue is closest to 1, unit norm.
// Throws AmbiguousEigenvalue if two eigenvalues are equidistant from 1
// within 1e-10, or if the selected eigenvector is genuinely complex.
VecX eigenvectorNearestUnitEigenvalue(const MatX& K);

}  // namespace ftcal
