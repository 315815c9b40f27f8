#include "ftcal/calib_known_gravity.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "ftcal/numerics.hpp"

namespace ftcal {

namespace {

// 3x9 block B with B * vec(M) = M * v (column-major vec), i.e. v^T kron I3.
void fillKroneckerBlock(MatX& A, Eigen::Index row, const Vec3& v) {
  for (int c = 0; c < 3; ++c) {
    A.block<3, 3>(row, 3 * c) = v(c) * Mat3::Identity();
  }
}

Mat3 unvec(const VecX& x) {
  return Eigen::Map<const Mat3>(x.data());  // column-major, matches vec()
}

double rmsResidual(const VecX& r) { return std::sqrt(r.squaredNorm() / r.size()); }

void checkKnownGravityInputs(const Dataset& data, const Vec3& gravity,
                             std::size_t min_samples) {
  if (data.size() < min_samples) {
    throw std::invalid_argument("calibration requires more samples");
  }
  if (gravity.norm() <= 0.0) {
    throw std::invalid_argument("gravity vector must be non-zero");
  }
}

}  // namespace

KnownGravityEstimate calibrateRelaxation(const Dataset& data, const Vec3& gravity) {
  checkKnownGravityInputs(data, gravity, 4);
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  // (f_i^T kron I3) vec(X) = R_TF^RB_i g with X ~ (1/m) R_TF^S: the measured
  // force sits in the regressor, the rotated gravity on the right-hand side.
  MatX A = MatX::Zero(3 * n, 9);
  VecX b(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WrenchSample& s = data.samples[static_cast<std::size_t>(i)];
    fillKroneckerBlock(A, 3 * i, s.force);
    b.segment<3>(3 * i) = s.flange_orientation.matrix() * gravity;
  }
  const Mat3 scaled = unvec(leastSquares(A, b));  // ~ (1/m) * R_TF^S
  Eigen::JacobiSVD<Mat3> svd(scaled);
  const double inverse_mass = svd.singularValues().mean();
  if (inverse_mass <= 0.0) {
    throw NonPositiveMass("calibrateRelaxation: recovered scale is not positive");
  }
  const double mass = 1.0 / inverse_mass;
  const RotationMatrix R = projectToSO3(scaled).transposed();  // R_S^TF
  VecX res(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WrenchSample& s = data.samples[static_cast<std::size_t>(i)];
    res.segment<3>(3 * i) =
        s.force - mass * (R.matrix() * (s.flange_orientation.matrix() * gravity));
  }
  return {R, mass, rmsResidual(res), KnownGravityMethod::Relaxation};
}

KnownGravityEstimate calibrateCayley(const Dataset& data, const Vec3& gravity,
                                     double mass, bool use_tls) {
  checkKnownGravityInputs(data, gravity, 2);
  if (mass <= 0.0) throw std::invalid_argument("calibrateCayley: mass must be > 0");
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  MatX A(3 * n, 3);
  VecX b(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WrenchSample& s = data.samples[static_cast<std::size_t>(i)];
    const Vec3 rotated = s.flange_orientation.matrix() * (mass * gravity);
    A.middleRows<3>(3 * i) = skew(s.force + rotated);
    b.segment<3>(3 * i) = s.force - rotated;
  }
  // Measurement noise eps enters the regressor as skew(eps) (variance 2 sigma^2
  // per column) and the right-hand side as eps (3 sigma^2 per column), with no
  // cross-correlation. Equilibrating the right-hand side before the total
  // least-squares solve (generalized TLS with these second moments) keeps the
  // errors-in-variables correction from over-shooting at low SNR.
  const double rhs_scale = std::sqrt(2.0 / 3.0);
  VecX sol;
  try {
    sol = use_tls ? VecX(totalLeastSquares(A, VecX(rhs_scale * b)) / rhs_scale)
                  : leastSquares(A, b);
  } catch (const NoTLSSolution&) {
    // The homogeneous solution has vanishing last component exactly when the
    // Cayley parameters diverge, i.e. the rotation angle is pi.
    throw SingularRotation("calibrateCayley: rotation at the Cayley chart singularity");
  } catch (const RankDeficient&) {
    // At an angle of exactly pi the skew regressor collapses to rank 2 even
    // with fully diverse poses: f_i + A_i m g is then parallel to the rotation
    // axis for every sample. Distinguish that from genuinely poor pose
    // diversity by checking the spread of the rotated gravity directions.
    MatX G(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      G.row(i) = (data.samples[static_cast<std::size_t>(i)].flange_orientation.matrix() *
                  (mass * gravity))
                     .transpose();
    }
    if (conditionEstimate(G) < 1e6) {
      throw SingularRotation("calibrateCayley: rotation at the Cayley chart singularity");
    }
    throw;
  }
  const Vec3 cgr(sol(0), sol(1), sol(2));
  // angle = 2 atan(||s||); the chart breaks down near pi.
  if (M_PI - 2.0 * std::atan(cgr.norm()) < 1e-3) {
    throw SingularRotation("calibrateCayley: estimated rotation too close to angle pi");
  }
  const RotationMatrix R = cayley(cgr);
  VecX res(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WrenchSample& s = data.samples[static_cast<std::size_t>(i)];
    res.segment<3>(3 * i) =
        s.force - R.matrix() * (s.flange_orientation.matrix() * (mass * gravity));
  }
  return {R, mass, rmsResidual(res),
          use_tls ? KnownGravityMethod::CayleyTLS : KnownGravityMethod::CayleyOLS};
}

CogEstimate estimateCog(const Dataset& data, const RotationMatrix& rotation,
                        const Vec3& gravity, double mass) {
  // Rank, not count, is the binding constraint: a lone pose leaves the rank-2
  // skew regressor deficient and surfaces as RankDeficient below.
  checkKnownGravityInputs(data, gravity, 1);
  if (mass <= 0.0) throw std::invalid_argument("estimateCog: mass must be > 0");
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Mat3 to_flange = rotation.matrix().transpose();  // R_TF^S
  MatX A(3 * n, 3);
  VecX b(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const WrenchSample& s = data.samples[static_cast<std::size_t>(i)];
    A.middleRows<3>(3 * i) = -skew(s.flange_orientation.matrix() * (mass * gravity));
    b.segment<3>(3 * i) = to_flange * s.torque;
  }
  const VecX sol = leastSquares(A, b);
  const Vec3 cog(sol(0), sol(1), sol(2));
  return {cog, rmsResidual(VecX(A * sol - b))};
}

}  // namespace ftcal
