#include <doctest.h>

#include <sstream>

#include "ftcal/eval_harness.hpp"

using namespace ftcal;

TEST_CASE("method names round-trip") {
  for (Method m : {Method::Relaxation, Method::CayleyTLS, Method::CayleyOLS, Method::Eigen,
                   Method::Nullspace, Method::Iterative}) {
    CHECK(methodFromName(methodName(m)) == m);
  }
  CHECK(methodFromName("cayley") == Method::CayleyTLS);
  CHECK(!methodFromName("bogus"));
}

TEST_CASE("default noise grid spans SNR 1e4 down to 1") {
  const auto grid = defaultNoiseGrid(9.81);
  CHECK(grid.size() == 8);
  CHECK(grid.front() == doctest::Approx(9.81e-4));
  CHECK(grid.back() == doctest::Approx(9.81));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("noise-free sweep cells are all exact") {
  SweepSpec spec;
  spec.noise_levels = {0.0};
  spec.num_repetitions = 5;
  spec.num_poses = 30;
  spec.methods = {Method::Relaxation, Method::CayleyTLS, Method::Eigen, Method::Iterative};
  spec.seed = 17;
  const auto table = runNoiseSweep(spec);
  CHECK(table.size() == 5 * 4);
  for (const auto& cell : table) {
    REQUIRE(cell.report.has_value());
    CHECK(cell.report->rotation_error_rad < 1e-8);
  }
}

TEST_CASE("sweep output is reproducible byte for byte") {
  SweepSpec spec;
  spec.noise_levels = {0.5, 2.0};
  spec.num_repetitions = 3;
  spec.num_poses = 20;
  spec.methods = {Method::Eigen, Method::Nullspace};
  spec.seed = 99;
  std::ostringstream a, b;
  writeSweepCsv(a, runNoiseSweep(spec));
  writeSweepCsv(b, runNoiseSweep(spec));
  CHECK(a.str() == b.str());
  CHECK(a.str().substr(0, 6) == "method");
}

TEST_CASE("sweep validates its spec") {
  SweepSpec spec;
  CHECK_THROWS_AS(runNoiseSweep(spec), std::invalid_argument);
  spec.noise_levels = {-1.0};
  spec.methods = {Method::Eigen};
  CHECK_THROWS_AS(runNoiseSweep(spec), std::invalid_argument);
}

TEST_CASE("iteration trace converges and all reports are finite") {
  SweepSpec spec;
  spec.noise_levels = {1.0};
  spec.num_repetitions = 5;
  spec.num_poses = 50;
  spec.methods = {Method::Iterative};
  spec.seed = 21;
  const auto table = runIterationTrace(spec);
  CHECK(!table.empty());
  for (const auto& row : table) {
    CHECK(std::isfinite(row.report.rotation_error_rad));
    REQUIRE(row.report.gravity_rel_error.has_value());
    CHECK(std::isfinite(*row.report.gravity_rel_error));
  }

  // Noise-free repetitions reach the exact solution by the final iteration.
  spec.noise_levels = {0.0};
  spec.num_repetitions = 2;
  for (const auto& row : runIterationTrace(spec)) {
    if (row.iteration >= 10) CHECK(row.report.rotation_error_rad < 1e-8);
  }
}

TEST_CASE("trace rejects wrong method lists") {
  SweepSpec spec;
  spec.noise_levels = {1.0};
  spec.methods = {Method::Eigen};
  CHECK_THROWS_AS(runIterationTrace(spec), std::invalid_argument);
}

TEST_CASE("equivalence audit emits three pairs per repetition") {
  SweepSpec spec;
  spec.noise_levels = {0.0};
  spec.num_repetitions = 4;
  spec.num_poses = 25;
  spec.methods = {Method::Eigen, Method::Nullspace, Method::Iterative};
  spec.seed = 5;
  const auto table = runEquivalenceAudit(spec);
  CHECK(table.size() == 4 * 3);
  for (const auto& row : table) {
    REQUIRE(row.rotation_disagreement_rad.has_value());
    CHECK(*row.rotation_disagreement_rad < 1e-8);
  }
}

TEST_CASE("summary statistics match direct recomputation") {
  CHECK(median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == doctest::Approx(2.5));
  CHECK(interquartileRange({1.0, 2.0, 3.0, 4.0, 5.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("failed cells carry the typed error name") {
  // Force noise so large relative to gravity that occasional failures are
  // possible is hard to construct deterministically; instead check the CSV
  // writer escapes a synthetic failed cell correctly.
  std::vector<SweepCell> table{{Method::Nullspace, 1.0, 0, std::nullopt, "RankDeficient"}};
  std::ostringstream out;
  writeSweepCsv(out, table);
  CHECK(out.str().find("failed:RankDeficient") != std::string::npos);
}
