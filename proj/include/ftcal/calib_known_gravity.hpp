#pragma once

#include "ftcal/model_sim.hpp"
#include "ftcal/so3.hpp"
#include "ftcal/types.hpp"

namespace ftcal {

enum class KnownGravityMethod { Relaxation, CayleyTLS, CayleyOLS };

struct KnownGravityEstimate {
  RotationMatrix rotation;      // R_S^TF
  double mass = 0.0;            // kg; input echo for the Cayley methods
  double residual_force = 0.0;  // N, per-component RMS after the fit
  KnownGravityMethod method = KnownGravityMethod::Relaxation;
};

struct CogEstimate {
  Vec3 cog = Vec3::Zero();       // m, sensor frame
  double residual_torque = 0.0;  // N*m, per-component RMS
};

// Joint rotation + mass. Stacks f_i = (m R_S^TF) (R_TF^RB_i g) as a linear
// system in vec(m R_S^TF), solves by least squares, projects onto SO(3) and
// recovers the mass as the mean singular value of the unconstrained estimate.
KnownGravityEstimate calibrateRelaxation(const Dataset& data, const Vec3& gravity);

// Rotation only, mass given: Cayley-transformed force relation
//   skew(f_i + R_TF^RB_i m g) s = f_i - R_TF^RB_i m g
// solved for the Cayley-Gibbs-Rodrigues parameters s by TLS (errors in
// variables: f appears on both sides) or plain least squares.
KnownGravityEstimate calibrateCayley(const Dataset& data, const Vec3& gravity,
                                     double mass, bool use_tls = true);

// Center of gravity from the torque relation, given rotation (R_S^TF),
// gravity and mass: R_TF^S tau_i = -skew(R_TF^RB_i m g) r.
CogEstimate estimateCog(const Dataset& data, const RotationMatrix& rotation,
                        const Vec3& gravity, double mass);

}  // namespace ftcal
