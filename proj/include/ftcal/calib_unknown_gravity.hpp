#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "ftcal/model_sim.hpp"
#include "ftcal/so3.hpp"
#include "ftcal/types.hpp"

namespace ftcal {

enum class UnknownGravityMethod { Eigen, Nullspace, Iterative };

// Joint estimate of R and the mass-scaled gravity vector g (mass folded in).
// The estimated rotation is R_TF^S (sensor -> tool flange), matching
// R_TF^S f_i = R_TF^RB_i g; both directions are exposed to keep transpose
// bookkeeping explicit.
struct UnknownGravityEstimate {
  RotationMatrix rotation_flange_from_sensor;  // R_TF^S
  Vec3 gravity_scaled = Vec3::Zero();          // m*g, robot base frame
  UnknownGravityMethod method = UnknownGravityMethod::Eigen;
  int iterations_used = 0;      // Iterative only
  double nullspace_gap = std::numeric_limits<double>::quiet_NaN();  // Nullspace only
  double residual = 0.0;        // RMS of R f_i - R_TF^RB_i g over all components

  RotationMatrix rotation_sensor_from_flange() const {
    return rotation_flange_from_sensor.transposed();
  }
};

// D stacks the flange rotations (3N x 3), F the f_i^T kron I3 blocks (3N x 9),
// in matching row order, so that F vec(R) - D g stacks the model residuals.
struct OperatorPair {
  MatX D;
  MatX F;
};

OperatorPair buildOperators(const Dataset& data);

// Half-steps of the alternating scheme, also used by the other methods.
Vec3 gravityGivenRotation(const OperatorPair& ops, const Mat3& rotation_flange_from_sensor);
Mat3 unconstrainedRotationGivenGravity(const OperatorPair& ops, const Vec3& gravity_scaled);
double residualRms(const OperatorPair& ops, const Mat3& rotation_flange_from_sensor,
                   const Vec3& gravity_scaled);

// Eigendecomposition of K = F^+ D D^+ F: the solution is the eigenvector with
// eigenvalue nearest 1, sign-fixed to det > 0 and projected onto SO(3).
UnknownGravityEstimate calibrateEigen(const Dataset& data);

// Nullspace of the stack of all pairwise-difference blocks
//   D_k D_i^T (f_i^T kron I3) - (f_k^T kron I3).
UnknownGravityEstimate calibrateNullspace(const Dataset& data);

struct IterativeOptions {
  int max_iters = 50;
  double tol = 1e-10;  // successive-rotation angle, radians
  // When set, the first rotation is solved from this guess instead of
  // starting the alternation from the identity.
  std::optional<Vec3> initial_gravity;
  // Called once per iteration with (iteration, rotation R_TF^S, gravity).
  std::function<void(int, const RotationMatrix&, const Vec3&)> observer;
};

class NonConvergence : public CalibrationError {
 public:
  NonConvergence(const std::string& what, UnknownGravityEstimate last_iterate,
                 double last_angle_change)
      : CalibrationError("NonConvergence", what),
        last_iterate(std::move(last_iterate)),
        last_angle_change(last_angle_change) {}
  UnknownGravityEstimate last_iterate;
  double last_angle_change;
};

// Alternating linear least squares with SO(3) projection as renormalization.
UnknownGravityEstimate calibrateIterative(const Dataset& data,
                                          const IterativeOptions& options = {});

}  // namespace ftcal
