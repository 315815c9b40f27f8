#include "ftcal/so3.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace ftcal {

Mat3 skew(const Vec3& s) {
  Mat3 m;
  m << 0.0, -s.z(), s.y(),  //
      s.z(), 0.0, -s.x(),   //
      -s.y(), s.x(), 0.0;
  return m;
}

Vec3 unskew(const Mat3& M) {
  const Mat3 a = 0.5 * (M - M.transpose());
  return Vec3(a(2, 1), a(0, 2), a(1, 0));
}

bool isRotation(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  const double ortho = (m.transpose() * m - Mat3::Identity()).norm();
  return ortho <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

RotationMatrix::RotationMatrix(const Mat3& m) : m_(m) {
  if (!isRotation(m)) {
    throw std::invalid_argument("matrix is not a rotation (R^T R != I or det != 1)");
  }
}

RotationMatrix projectToSO3(const Mat3& M) {
  if (!M.allFinite()) throw std::invalid_argument("projectToSO3: non-finite input");
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3& s = svd.singularValues();
  if (s(1) <= 1e-12 * std::max(s(0), 1e-300)) {
    throw DegenerateInput("projectToSO3: input has rank <= 1, projection not unique");
  }
  const double a = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  Mat3 R = svd.matrixU() * Vec3(1.0, 1.0, a).asDiagonal() * svd.matrixV().transpose();
  return RotationMatrix::unchecked(R);
}

RotationMatrix cayley(const Vec3& s) {
  const Mat3 sigma = skew(s);
  // I + skew(s) is always invertible; re-project to absorb rounding.
  Mat3 R = (Mat3::Identity() + sigma).inverse() * (Mat3::Identity() - sigma);
  return projectToSO3(R);
}

Vec3 inverseCayley(const RotationMatrix& R) {
  const double angle = rotationAngleBetween(R, Mat3::Identity());
  if (M_PI - angle < 1e-8) {
    throw SingularRotation("inverseCayley: rotation angle within 1e-8 of pi");
  }
  const Mat3 sigma =
      (Mat3::Identity() - R.matrix()) * (Mat3::Identity() + R.matrix()).inverse();
  return unskew(sigma);
}

double rotationAngleBetween(const Mat3& R1, const Mat3& R2) {
  // atan2 of (sin, cos) extracted from the relative rotation. Equivalent to
  // acos((trace-1)/2) but without the sqrt(eps) precision floor of acos near
  // an angle of zero, where the antisymmetric part carries the information.
  const Mat3 M = R1.transpose() * R2;
  const double c = (M.trace() - 1.0) / 2.0;
  const double s = unskew(M).norm();
  return std::atan2(s, c);
}

}  // namespace ftcal
