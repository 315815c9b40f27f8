#include "ftcal/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace ftcal {

namespace {

constexpr double kCondLimit = 1e12;

Eigen::BDCSVD<MatX> thinSvd(const MatX& A) {
  return Eigen::BDCSVD<MatX>(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

double condFromSingularValues(const VecX& s) {
  const double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

}  // namespace

double conditionEstimate(const MatX& A) {
  Eigen::BDCSVD<MatX> svd(A);
  return condFromSingularValues(svd.singularValues());
}

VecX leastSquares(const MatX& A, const VecX& b) {
  const auto svd = thinSvd(A);
  const double cond = condFromSingularValues(svd.singularValues());
  if (!(cond < kCondLimit)) {
    throw RankDeficient(cond, "leastSquares: regressor is rank deficient");
  }
  return svd.solve(b);
}

MatX leastSquares(const MatX& A, const MatX& B) {
  const auto svd = thinSvd(A);
  const double cond = condFromSingularValues(svd.singularValues());
  if (!(cond < kCondLimit)) {
    throw RankDeficient(cond, "leastSquares: regressor is rank deficient");
  }
  return svd.solve(B);
}

VecX totalLeastSquares(const MatX& A, const VecX& b) {
  const Eigen::Index n = A.cols();
  {
    const double cond = conditionEstimate(A);
    if (!(cond < kCondLimit)) {
      throw RankDeficient(cond, "totalLeastSquares: regressor is rank deficient");
    }
  }
  MatX C(A.rows(), n + 1);
  C << A, b;
  Eigen::BDCSVD<MatX> svd(C, Eigen::ComputeFullV);
  const VecX& s = svd.singularValues();
  if (s.size() < n + 1 || (s(n - 1) - s(n)) <= 1e-12 * s(0)) {
    throw RankDeficient(condFromSingularValues(s),
                        "totalLeastSquares: smallest singular value of [A b] is "
                        "not separated from the next");
  }
  const VecX v = svd.matrixV().col(n);
  if (std::abs(v(n)) <= 1e-12) {
    throw NoTLSSolution("totalLeastSquares: last component of the singular vector is ~0");
  }
  return -v.head(n) / v(n);
}

NullspaceResult nullspaceVector(const MatX& M) {
  const Eigen::Index m = M.rows();
  const Eigen::Index n = M.cols();
  if (m < n - 1) {
    throw std::invalid_argument("nullspaceVector: requires rows >= cols - 1");
  }
  Eigen::BDCSVD<MatX> svd(M, Eigen::ComputeFullV);
  // Singular values padded with implicit zeros up to n.
  const VecX& s = svd.singularValues();
  auto sv = [&](Eigen::Index i) { return i < s.size() ? s(i) : 0.0; };
  const double smallest = sv(n - 1);
  const double second = sv(n - 2);
  const double scale = std::max(sv(0), 1e-300);
  if (second - smallest <= 1e-8 * scale) {
    throw AmbiguousNullspace(
        "nullspaceVector: two smallest singular values coincide; nullspace "
        "not one-dimensional (insufficient pose diversity)");
  }
  NullspaceResult out;
  out.vector = svd.matrixV().col(n - 1);
  out.vector.normalize();
  out.gap = smallest > 0.0 ? second / smallest
                           : std::numeric_limits<double>::infinity();
  return out;
}

VecX eigenvectorNearestUnitEigenvalue(const MatX& K) {
  if (K.rows() != K.cols()) {
    throw std::invalid_argument("eigenvectorNearestUnitEigenvalue: K must be square");
  }
  Eigen::EigenSolver<MatX> es(K);
  const auto& vals = es.eigenvalues();
  Eigen::Index best = 0;
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    const double d = std::abs(vals(i) - std::complex<double>(1.0, 0.0));
    if (d < d1) {
      d2 = d1;
      d1 = d;
      best = i;
    } else if (d < d2) {
      d2 = d;
    }
  }
  if (d2 - d1 < 1e-10) {
    throw AmbiguousEigenvalue(
        "eigenvectorNearestUnitEigenvalue: two eigenvalues equidistant from 1");
  }
  Eigen::VectorXcd v = es.eigenvectors().col(best);
  if (v.imag().norm() >= 1e-6 * v.norm()) {
    throw AmbiguousEigenvalue(
        "eigenvectorNearestUnitEigenvalue: selected eigenvector is complex");
  }
  VecX r = v.real();
  r.normalize();
  return r;
}

}  // namespace ftcal
