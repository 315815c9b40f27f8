#include <doctest.h>

#include "ftcal/model_sim.hpp"

using namespace ftcal;

TEST_CASE("sampleRandomRotation produces valid, reproducible rotations") {
  Rng rng(20);
  for (int i = 0; i < 100; ++i) CHECK(isRotation(sampleRandomRotation(rng)));

  Rng a(7), b(7);
  CHECK((sampleRandomRotation(a).matrix() - sampleRandomRotation(b).matrix()).norm() == 0.0);
}

TEST_CASE("sampleRandomRotation is Haar-uniform: mean trace ~ 0") {
  Rng rng(21);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) sum += sampleRandomRotation(rng).matrix().trace();
  CHECK(std::abs(sum / draws) < 0.02);
}

TEST_CASE("forwardWrench identity chain") {
  SyntheticScenario sc;
  sc.gravity = Vec3(0, 0, -9.8);
  Rng rng(0);
  const WrenchSample s = forwardWrench(sc, RotationMatrix(), rng);
  CHECK((s.force - Vec3(0, 0, -9.8)).norm() < 1e-15);
  CHECK(s.torque.norm() < 1e-15);
}

TEST_CASE("forwardWrench torque from offset center of gravity") {
  SyntheticScenario sc;
  sc.gravity = Vec3(0, 0, -9.8);
  sc.cog = Vec3(0.1, 0, 0);
  Rng rng(0);
  const WrenchSample s = forwardWrench(sc, RotationMatrix(), rng);
  // Hand evaluation: (0.1,0,0) x (0,0,-9.8) = (0, 0.98, 0).
  CHECK((s.torque - Vec3(0, 0.98, 0)).norm() < 1e-12);
}

TEST_CASE("forwardWrench noise variance matches the configured sigma") {
  SyntheticScenario sc;
  sc.noise_std_force = 1.0;
  Rng rng(22);
  double ss = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const WrenchSample s = forwardWrench(sc, RotationMatrix(), rng);
    ss += (s.force - Vec3(0, 0, -9.81)).squaredNorm();
  }
  CHECK(ss / (3 * draws) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("generateDataset determinism and validation") {
  SyntheticScenario sc;
  sc.num_poses = 100;
  sc.noise_std_force = 0.5;
  sc.rng_seed = 42;
  const auto [d1, t1] = generateDataset(sc);
  const auto [d2, t2] = generateDataset(sc);
  CHECK(d1.size() == 100);
  for (std::size_t i = 0; i < d1.size(); ++i) {
    CHECK((d1.samples[i].force - d2.samples[i].force).norm() == 0.0);
    CHECK((d1.samples[i].torque - d2.samples[i].torque).norm() == 0.0);
    CHECK((d1.samples[i].flange_orientation.matrix() -
           d2.samples[i].flange_orientation.matrix())
              .norm() == 0.0);
  }

  sc.num_poses = 3;
  CHECK_THROWS_AS(generateDataset(sc), std::invalid_argument);
  sc.num_poses = 10;
  sc.mass = 0.0;
  CHECK_THROWS_AS(generateDataset(sc), std::invalid_argument);
}

TEST_CASE("noise-free forward model satisfies the force relation exactly") {
  Rng rng(23);
  SyntheticScenario sc;
  sc.true_rotation = sampleRandomRotation(rng);
  sc.mass = 2.3;
  sc.gravity = Vec3(0.4, -1.0, -9.7);
  sc.cog = Vec3(0.02, -0.01, 0.07);
  sc.rng_seed = 5;
  const auto [data, truth] = generateDataset(sc);
  for (const WrenchSample& s : data.samples) {
    const Vec3 g_tf = s.flange_orientation.matrix() * (sc.mass * sc.gravity);
    CHECK((s.force - truth.rotation.matrix() * g_tf).norm() < 1e-12);
    CHECK((s.torque - truth.rotation.matrix() * skew(sc.cog) * g_tf).norm() < 1e-12);
  }
}

TEST_CASE("forward model equivariance under a base-frame rotation") {
  Rng rng(24);
  const Mat3 Q = sampleRandomRotation(rng);
  SyntheticScenario sc;
  sc.true_rotation = sampleRandomRotation(rng);
  sc.gravity = Vec3(1.0, 2.0, -9.0);
  sc.cog = Vec3(0.05, 0.0, -0.02);

  const RotationMatrix pose = sampleRandomRotation(rng);
  Rng r1(0), r2(0);
  const WrenchSample original = forwardWrench(sc, pose, r1);
  // Rotate g by Q and the flange orientation by Q^T on the base side.
  SyntheticScenario rotated = sc;
  rotated.gravity = Q * sc.gravity;
  const RotationMatrix pose_rotated((pose.matrix() * Q.transpose()).eval());
  const WrenchSample moved = forwardWrench(rotated, pose_rotated, r2);
  CHECK((original.force - moved.force).norm() < 1e-12);
  CHECK((original.torque - moved.torque).norm() < 1e-12);
}
