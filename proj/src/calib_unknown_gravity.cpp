#include "ftcal/calib_unknown_gravity.hpp"

#include <cmath>

#include "ftcal/numerics.hpp"

namespace ftcal {

namespace {

Mat3 unvec(const VecX& x) { return Eigen::Map<const Mat3>(x.data()); }

VecX vec(const Mat3& M) { return Eigen::Map<const VecX>(M.data(), 9); }

// 3x9 block with B * vec(M) = M * v.
MatX kroneckerBlock(const Vec3& v) {
  MatX B = MatX::Zero(3, 9);
  for (int c = 0; c < 3; ++c) B.block<3, 3>(0, 3 * c) = v(c) * Mat3::Identity();
  return B;
}

void requireFullColumnRank(const MatX& F) {
  const double cond = conditionEstimate(F);
  if (!(cond < 1e12)) {
    throw RankDeficient(cond,
                        "unknown-gravity calibration: stacked force operator is rank "
                        "deficient (insufficient pose or force diversity)");
  }
}

// Reshape, fix the sign so det > 0, project onto SO(3).
RotationMatrix toRotation(const VecX& r) {
  Mat3 R = unvec(r);
  if (R.determinant() < 0.0) R = -R;
  return projectToSO3(R);
}

}  // namespace

OperatorPair buildOperators(const Dataset& data) {
  if (data.size() < 4) {
    throw std::invalid_argument("buildOperators: requires at least 4 samples");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  OperatorPair ops{MatX(3 * n, 3), MatX(3 * n, 9)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const WrenchSample& s = data.samples[static_cast<std::size_t>(i)];
    ops.D.middleRows<3>(3 * i) = s.flange_orientation.matrix();
    ops.F.middleRows<3>(3 * i) = kroneckerBlock(s.force);
  }
  return ops;
}

Vec3 gravityGivenRotation(const OperatorPair& ops, const Mat3& rotation_flange_from_sensor) {
  return leastSquares(ops.D, VecX(ops.F * vec(rotation_flange_from_sensor)));
}

Mat3 unconstrainedRotationGivenGravity(const OperatorPair& ops, const Vec3& gravity_scaled) {
  return unvec(leastSquares(ops.F, VecX(ops.D * gravity_scaled)));
}

double residualRms(const OperatorPair& ops, const Mat3& rotation_flange_from_sensor,
                   const Vec3& gravity_scaled) {
  const VecX r = ops.F * vec(rotation_flange_from_sensor) - ops.D * gravity_scaled;
  return std::sqrt(r.squaredNorm() / r.size());
}

UnknownGravityEstimate calibrateEigen(const Dataset& data) {
  const OperatorPair ops = buildOperators(data);
  requireFullColumnRank(ops.F);
  const MatX K = leastSquares(ops.F, ops.D) * leastSquares(ops.D, ops.F);  // 9x9
  const RotationMatrix R = toRotation(eigenvectorNearestUnitEigenvalue(K));
  const Vec3 g = gravityGivenRotation(ops, R);
  return {R, g, UnknownGravityMethod::Eigen, 0,
          std::numeric_limits<double>::quiet_NaN(), residualRms(ops, R, g)};
}

UnknownGravityEstimate calibrateNullspace(const Dataset& data) {
  if (data.size() < 2) {
    throw std::invalid_argument("calibrateNullspace: requires at least 2 samples");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(data.size());
  const Eigen::Index pairs = n * (n - 1) / 2;
  if (3 * pairs < 8) {
    throw AmbiguousNullspace(
        "calibrateNullspace: too few measurement pairs; nullspace dimension > 1");
  }
  MatX M(3 * pairs, 9);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const WrenchSample& si = data.samples[static_cast<std::size_t>(i)];
    const MatX Fi = kroneckerBlock(si.force);
    for (Eigen::Index k = i + 1; k < n; ++k) {
      const WrenchSample& sk = data.samples[static_cast<std::size_t>(k)];
      M.middleRows<3>(row) =
          sk.flange_orientation.matrix() * si.flange_orientation.matrix().transpose() * Fi -
          kroneckerBlock(sk.force);
      row += 3;
    }
  }
  const NullspaceResult ns = nullspaceVector(M);
  const RotationMatrix R = toRotation(ns.vector);
  const OperatorPair ops = buildOperators(data);
  const Vec3 g = gravityGivenRotation(ops, R);
  return {R, g, UnknownGravityMethod::Nullspace, 0, ns.gap, residualRms(ops, R, g)};
}

namespace {

struct IterationBranch {
  UnknownGravityEstimate est;
  bool converged = false;
  double last_delta = std::numeric_limits<double>::infinity();
  std::vector<std::pair<RotationMatrix, Vec3>> trajectory;
};

IterationBranch runAlternation(const OperatorPair& ops, Vec3 g, int max_iters, double tol) {
  IterationBranch br;
  RotationMatrix R;  // identity
  int iterations = 0;
  while (iterations < max_iters) {
    const RotationMatrix next = projectToSO3(unconstrainedRotationGivenGravity(ops, g));
    g = gravityGivenRotation(ops, next);
    ++iterations;
    br.trajectory.emplace_back(next, g);
    br.last_delta = rotationAngleBetween(next, R);
    R = next;
    if (br.last_delta < tol) {
      br.converged = true;
      break;
    }
  }
  br.est = {R, g, UnknownGravityMethod::Iterative, iterations,
            std::numeric_limits<double>::quiet_NaN(), residualRms(ops, R, g)};
  return br;
}

}  // namespace

UnknownGravityEstimate calibrateIterative(const Dataset& data,
                                          const IterativeOptions& options) {
  if (options.max_iters < 1) {
    throw std::invalid_argument("calibrateIterative: max_iters must be >= 1");
  }
  const OperatorPair ops = buildOperators(data);
  requireFullColumnRank(ops.F);

  const Vec3 g0 = options.initial_gravity
                      ? *options.initial_gravity
                      : gravityGivenRotation(ops, RotationMatrix());
  const IterationBranch main = runAlternation(ops, g0, options.max_iters, options.tol);

  // The bilinear residual has a second, spurious attractor roughly antipodal
  // in g to the true solution; the alternation can stall there when the
  // initial gravity points the wrong way. Rerun from the antipodal of the
  // converged gravity and keep the better (converged, lower-residual) branch.
  const IterationBranch* winner = &main;
  std::optional<IterationBranch> antipodal;
  try {
    antipodal =
        runAlternation(ops, -main.est.gravity_scaled, options.max_iters, options.tol);
    if ((antipodal->converged && !main.converged) ||
        (antipodal->converged == main.converged &&
         antipodal->est.residual < main.est.residual)) {
      winner = &*antipodal;
    }
  } catch (const CalibrationError&) {
    // e.g. a degenerate projection along the antipodal branch: keep main.
  }

  if (options.observer) {
    int iteration = 0;
    for (const auto& [R, g] : winner->trajectory) options.observer(++iteration, R, g);
  }
  if (!winner->converged) {
    throw NonConvergence("calibrateIterative: rotation change above tolerance after max_iters",
                         winner->est, winner->last_delta);
  }
  return winner->est;
}

}  // namespace ftcal
