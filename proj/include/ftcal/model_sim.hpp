#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ftcal/so3.hpp"
#include "ftcal/types.hpp"

namespace ftcal {

using Rng = std::mt19937_64;

// One measurement record. Frames: flange_orientation is R_TF^RB (rotates
// robot-base coordinates into the tool-flange frame); force/torque are read
// in the sensor frame.
struct WrenchSample {
  RotationMatrix flange_orientation;
  Vec3 force = Vec3::Zero();   // N
  Vec3 torque = Vec3::Zero();  // N*m
};

struct Dataset {
  std::vector<WrenchSample> samples;
  bool has_torque = true;  // false when loaded from a force-only file
  std::size_t size() const { return samples.size(); }
};

// Ground truth of a synthetic scenario, also the CLI's report payload.
struct CalibrationResult {
  RotationMatrix rotation;  // R_S^TF (tool flange -> sensor)
  double mass = 1.0;        // kg
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);  // m/s^2, robot base frame
  Vec3 cog = Vec3::Zero();  // m, sensor frame
};

struct SyntheticScenario {
  RotationMatrix true_rotation;                  // R_S^TF
  double mass = 1.0;                             // kg, > 0
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);          // m/s^2
  Vec3 cog = Vec3::Zero();                       // m
  double noise_std_force = 0.0;                  // N
  std::optional<double> noise_std_torque;        // N*m; defaults to force sigma
  int num_poses = 100;                           // >= 4
  std::uint64_t rng_seed = 0;

  double torqueNoiseStd() const {
    return noise_std_torque.value_or(noise_std_force);
  }
};

// Haar-uniform rotation: SO(3) projection of a 3x3 iid standard normal matrix.
RotationMatrix sampleRandomRotation(Rng& rng);

// Noisy forward model:
//   f = R_S^TF R_TF^RB (m g) + eps_f
//   tau = R_S^TF skew(cog) R_TF^RB (m g) + eps_tau
WrenchSample forwardWrench(const SyntheticScenario& scenario,
                           const RotationMatrix& flange_orientation, Rng& rng);

// num_poses samples at independent Haar-random flange orientations,
// deterministic given rng_seed. Throws std::invalid_argument on invalid
// scenario parameters (mass <= 0, num_poses < 4, negative noise).
std::pair<Dataset, CalibrationResult> generateDataset(const SyntheticScenario& scenario);

}  // namespace ftcal
