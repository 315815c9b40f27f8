#include "ftcal/model_sim.hpp"

namespace ftcal {

RotationMatrix sampleRandomRotation(Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat3 G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G(i, j) = normal(rng);
  return projectToSO3(G);
}

WrenchSample forwardWrench(const SyntheticScenario& scenario,
                           const RotationMatrix& flange_orientation, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Vec3 g_tf = flange_orientation.matrix() * (scenario.mass * scenario.gravity);
  WrenchSample sample{flange_orientation,
                      scenario.true_rotation.matrix() * g_tf,
                      scenario.true_rotation.matrix() * skew(scenario.cog) * g_tf};
  const double sf = scenario.noise_std_force;
  const double st = scenario.torqueNoiseStd();
  for (int i = 0; i < 3; ++i) sample.force(i) += sf * normal(rng);
  for (int i = 0; i < 3; ++i) sample.torque(i) += st * normal(rng);
  return sample;
}

std::pair<Dataset, CalibrationResult> generateDataset(const SyntheticScenario& scenario) {
  if (scenario.mass <= 0.0) {
    throw std::invalid_argument("generateDataset: mass must be > 0");
  }
  if (scenario.num_poses < 4) {
    throw std::invalid_argument("generateDataset: num_poses must be >= 4");
  }
  if (scenario.noise_std_force < 0.0 || scenario.torqueNoiseStd() < 0.0) {
    throw std::invalid_argument("generateDataset: noise std must be >= 0");
  }
  Rng rng(scenario.rng_seed);
  Dataset data;
  data.samples.reserve(static_cast<std::size_t>(scenario.num_poses));
  for (int i = 0; i < scenario.num_poses; ++i) {
    const RotationMatrix pose = sampleRandomRotation(rng);
    data.samples.push_back(forwardWrench(scenario, pose, rng));
  }
  CalibrationResult truth{scenario.true_rotation, scenario.mass, scenario.gravity,
                          scenario.cog};
  return {std::move(data), truth};
}

}  // namespace ftcal
