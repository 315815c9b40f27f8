#pragma once

#include "ftcal/types.hpp"

namespace ftcal {

// Cross-product matrix: skew(s) * v == s.cross(v).
Mat3 skew(const Vec3& s);

// Inverse of skew() for (near-)skew-symmetric input; averages M and -M^T.
Vec3 unskew(const Mat3& M);

// Orthonormality / determinant check at the given Frobenius tolerance.
bool isRotation(const Mat3& m, double tol = 1e-10);

// Value type enforcing R^T R = I and det(R) = 1 (tolerance 1e-10, Frobenius).
// Converts implicitly to const Mat3& so it composes with Eigen expressions.
class RotationMatrix {
 public:
  RotationMatrix() : m_(Mat3::Identity()) {}

  // Validates; throws std::invalid_argument if m is not a rotation.
  explicit RotationMatrix(const Mat3& m);

  // Caller guarantees the invariants (e.g. output of an SVD projection).
  static RotationMatrix unchecked(const Mat3& m) {
    return RotationMatrix(m, Unchecked{});
  }

  const Mat3& matrix() const { return m_; }
  operator const Mat3&() const { return m_; }

  RotationMatrix transposed() const {
    return RotationMatrix(m_.transpose().eval(), Unchecked{});
  }

 private:
  struct Unchecked {};
  RotationMatrix(const Mat3& m, Unchecked) : m_(m) {}
  Mat3 m_;
};

// Closest rotation in Frobenius norm: R = U diag(1,1,det(UV^T)) V^T.
// Throws DegenerateInput if rank(M) <= 1 (projection not unique).
RotationMatrix projectToSO3(const Mat3& M);

// R = (I + skew(s))^-1 (I - skew(s)); cayley(0) = I.
RotationMatrix cayley(const Vec3& s);

// Cayley-Gibbs-Rodrigues parameters of R. Throws SingularRotation when the
// rotation angle is within 1e-8 of pi (chart singularity).
Vec3 inverseCayley(const RotationMatrix& R);

// Geodesic distance acos((trace(R1^T R2) - 1)/2), clamped into [0, pi].
double rotationAngleBetween(const Mat3& R1, const Mat3& R2);

}  // namespace ftcal
