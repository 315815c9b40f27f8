#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ftcal/calib_known_gravity.hpp"
#include "ftcal/calib_unknown_gravity.hpp"
#include "ftcal/model_sim.hpp"

namespace ftcal {

enum class Method { Relaxation, CayleyTLS, CayleyOLS, Eigen, Nullspace, Iterative };

std::string methodName(Method m);
std::optional<Method> methodFromName(const std::string& name);
bool methodNeedsKnownGravity(Method m);

// Error metrics of one estimate vs. ground truth. Optional fields are absent
// when the method does not produce the corresponding quantity.
struct ErrorReport {
  double rotation_error_rad = 0.0;
  std::optional<double> gravity_rel_error;            // ||g_hat - g|| / ||g||
  std::optional<double> gravity_direction_error_rad;  // angle between g_hat and g
  std::optional<double> mass_rel_error;
};

ErrorReport compareKnownGravity(const KnownGravityEstimate& est,
                                const CalibrationResult& truth);
ErrorReport compareUnknownGravity(const UnknownGravityEstimate& est,
                                  const CalibrationResult& truth);

struct SweepSpec {
  std::vector<double> noise_levels;  // sigma_f values, N
  int num_repetitions = 100;
  int num_poses = 100;
  std::vector<Method> methods;
  // Scenario overrides.
  double mass_error_factor = 1.0;  // mass handed to the Cayley methods = factor * m_true
  double sigma_g = 100.0;          // per-component std of the random gravity (unknown-g runs)
  double known_gravity_mass = 1.0; // true mass in known-gravity scenarios
  double known_gravity_norm = 9.81;
  std::uint64_t seed = 0;
  int max_iters = 50;
  double tol = 1e-10;
};

// 8 log-spaced sigma_f values spanning SNR 1e4 down to 1 for the given
// signal scale (m * ||g||).
std::vector<double> defaultNoiseGrid(double signal_scale = 9.81);

struct SweepCell {
  Method method;
  double sigma_f = 0.0;
  int repetition = 0;
  std::optional<ErrorReport> report;  // absent for failed cells
  std::string failure;                // typed error name when the estimator failed
};

// One fresh scenario + dataset per (sigma_f, repetition) cell, every listed
// method applied to it; failures are recorded, never aborting the sweep.
std::vector<SweepCell> runNoiseSweep(const SweepSpec& spec);

struct TraceRow {
  int repetition = 0;
  int iteration = 0;
  ErrorReport report;
};

// Per-iteration error traces of the iterative method with random
// unit-variance initial gravity guesses. Uses noise_levels[0] as sigma_f.
std::vector<TraceRow> runIterationTrace(const SweepSpec& spec);

struct AuditRow {
  int repetition = 0;
  Method method_a = Method::Eigen;
  Method method_b = Method::Nullspace;
  std::optional<double> rotation_disagreement_rad;
  std::optional<double> gravity_disagreement_rel;
  std::string failure;
};

// Pairwise rotation/gravity disagreement among the unknown-gravity methods.
std::vector<AuditRow> runEquivalenceAudit(const SweepSpec& spec);

// RFC-4180 style CSV with a header row; doubles in shortest round-trip form.
void writeSweepCsv(std::ostream& out, const std::vector<SweepCell>& table);
void writeTraceCsv(std::ostream& out, const std::vector<TraceRow>& table);
void writeAuditCsv(std::ostream& out, const std::vector<AuditRow>& table);

// Summary statistics (linear interpolation quantiles).
double median(std::vector<double> values);
double interquartileRange(std::vector<double> values);

}  // namespace ftcal
