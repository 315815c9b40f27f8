#include <doctest.h>

#include "ftcal/calib_known_gravity.hpp"
#include "ftcal/eval_harness.hpp"
#include "ftcal/model_sim.hpp"

using namespace ftcal;

namespace {

SyntheticScenario baseScenario(std::uint64_t seed, double noise = 0.0) {
  Rng rng(seed);
  SyntheticScenario sc;
  // Keep the true rotation away from pi: the Cayley chart excludes it.
  sc.true_rotation = sampleRandomRotation(rng);
  while (rotationAngleBetween(sc.true_rotation, Mat3::Identity()) > 3.0) {
    sc.true_rotation = sampleRandomRotation(rng);
  }
  sc.mass = 2.5;
  sc.gravity = Vec3(0, 0, -9.81);
  sc.cog = Vec3(0.01, -0.02, 0.05);
  sc.noise_std_force = noise;
  sc.num_poses = 100;
  sc.rng_seed = seed + 1000;
  return sc;
}

}  // namespace

TEST_CASE("relaxation recovers rotation and mass exactly on noise-free data") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto sc = baseScenario(seed);
    const auto [data, truth] = generateDataset(sc);
    const auto est = calibrateRelaxation(data, sc.gravity);
    CHECK(rotationAngleBetween(est.rotation, truth.rotation) < 1e-9);
    CHECK(est.mass == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(est.residual_force < 1e-10);
  }
}

TEST_CASE("relaxation input validation") {
  const auto [data, truth] = generateDataset(baseScenario(4));
  CHECK_THROWS_AS(calibrateRelaxation(data, Vec3::Zero()), std::invalid_argument);
  Dataset small;
  small.samples.assign(data.samples.begin(), data.samples.begin() + 3);
  CHECK_THROWS_AS(calibrateRelaxation(small, Vec3(0, 0, -9.81)), std::invalid_argument);
}

TEST_CASE("relaxation under moderate noise stays accurate (Monte Carlo)") {
  std::vector<double> errors;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto sc = baseScenario(seed, 0.1);  // SNR ~ 100 relative to m*||g||
    const auto [data, truth] = generateDataset(sc);
    errors.push_back(
        rotationAngleBetween(calibrateRelaxation(data, sc.gravity).rotation, truth.rotation));
  }
  CHECK(median(errors) < 0.01);
}

TEST_CASE("relaxation rotation is scale invariant, mass scales linearly") {
  auto sc = baseScenario(5);
  const auto [data, truth] = generateDataset(sc);
  auto scaled_sc = sc;
  scaled_sc.mass = 3.0 * sc.mass;
  const auto [scaled_data, scaled_truth] = generateDataset(scaled_sc);
  const auto est = calibrateRelaxation(data, sc.gravity);
  const auto scaled = calibrateRelaxation(scaled_data, sc.gravity);
  CHECK(rotationAngleBetween(est.rotation, scaled.rotation) < 1e-9);
  CHECK(scaled.mass == doctest::Approx(3.0 * est.mass).epsilon(1e-9));
}

TEST_CASE("cayley recovers the rotation exactly given the correct mass") {
  for (std::uint64_t seed : {6u, 7u}) {
    const auto sc = baseScenario(seed);
    const auto [data, truth] = generateDataset(sc);
    for (bool tls : {true, false}) {
      const auto est = calibrateCayley(data, sc.gravity, sc.mass, tls);
      CHECK(rotationAngleBetween(est.rotation, truth.rotation) < 1e-9);
    }
    // Agreement with relaxation on noise-free data.
    const auto relax = calibrateRelaxation(data, sc.gravity);
    const auto cay = calibrateCayley(data, sc.gravity, sc.mass, true);
    CHECK(rotationAngleBetween(relax.rotation, cay.rotation) < 1e-8);
  }
}

TEST_CASE("cayley with a biased mass is worse than relaxation at low noise") {
  const auto sc = baseScenario(8, 1e-3);
  const auto [data, truth] = generateDataset(sc);
  const auto relax = calibrateRelaxation(data, sc.gravity);
  const auto cay = calibrateCayley(data, sc.gravity, 1.1 * sc.mass, true);
  CHECK(rotationAngleBetween(cay.rotation, truth.rotation) >
        rotationAngleBetween(relax.rotation, truth.rotation));
}

TEST_CASE("cayley TLS is no worse than OLS under force noise (median over 200 trials)") {
  std::vector<double> tls_err, ols_err;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto sc = baseScenario(seed, 1.0);
    const auto [data, truth] = generateDataset(sc);
    tls_err.push_back(rotationAngleBetween(
        calibrateCayley(data, sc.gravity, sc.mass, true).rotation, truth.rotation));
    ols_err.push_back(rotationAngleBetween(
        calibrateCayley(data, sc.gravity, sc.mass, false).rotation, truth.rotation));
  }
  CHECK(median(tls_err) <= median(ols_err));
}

TEST_CASE("cayley rejects rotations at the chart singularity") {
  Rng rng(1);
  SyntheticScenario sc;
  sc.true_rotation = RotationMatrix(Eigen::AngleAxisd(M_PI, Vec3::UnitX()).matrix());
  sc.gravity = Vec3(0, 0, -9.81);
  sc.rng_seed = 3;
  const auto [data, truth] = generateDataset(sc);
  CHECK_THROWS_AS(calibrateCayley(data, sc.gravity, sc.mass, true), SingularRotation);
}

TEST_CASE("estimateCog recovers the center of gravity exactly on noise-free data") {
  const auto sc = baseScenario(9);
  const auto [data, truth] = generateDataset(sc);
  const auto est = estimateCog(data, truth.rotation, sc.gravity, sc.mass);
  CHECK((est.cog - sc.cog).norm() < 1e-10);
  CHECK(est.residual_torque < 1e-10);
}

TEST_CASE("estimateCog with zero center of gravity") {
  auto sc = baseScenario(10);
  sc.cog = Vec3::Zero();
  const auto [data, truth] = generateDataset(sc);
  CHECK(estimateCog(data, truth.rotation, sc.gravity, sc.mass).cog.norm() < 1e-12);
}

TEST_CASE("estimateCog is rank deficient with a single pose") {
  const auto sc = baseScenario(11);
  const auto [data, truth] = generateDataset(sc);
  Dataset single;
  single.samples.assign(data.samples.begin(), data.samples.begin() + 1);
  // A single 3x3 skew regressor has rank 2.
  CHECK_THROWS_AS(estimateCog(single, truth.rotation, sc.gravity, sc.mass), RankDeficient);
}
