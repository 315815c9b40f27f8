#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "ftcal/model_sim.hpp"
#include "ftcal/types.hpp"

namespace ftcal {

class ParseError : public CalibrationError {
 public:
  explicit ParseError(const std::string& what) : CalibrationError("ParseError", what) {}
};

class InvalidOrientation : public CalibrationError {
 public:
  InvalidOrientation(std::size_t sample_index, double deviation)
      : CalibrationError("InvalidOrientation",
                         "sample " + std::to_string(sample_index) +
                             ": orientation deviates from SO(3) by " +
                             std::to_string(deviation)),
        sample_index(sample_index),
        deviation(deviation) {}
  std::size_t sample_index;
  double deviation;
};

inline constexpr const char* kDatasetSchemaVersion = "1";

// Orientations are serialized row-major (r11 r12 r13 r21 ... r33) and must
// pass the rotation check within 1e-6; they are re-orthonormalized via the
// SO(3) projection on load. Torque is optional. Dispatch is by extension:
// ".json" or ".csv" (one sample per row, 12 or 15 numeric columns).
Dataset loadDataset(const std::string& path);
Dataset loadDatasetJson(std::istream& in);
Dataset loadDatasetCsv(std::istream& in);
void saveDataset(const std::string& path, const Dataset& data);
void saveDatasetJson(std::ostream& out, const Dataset& data);
void saveDatasetCsv(std::ostream& out, const Dataset& data);

// Ground-truth sidecar written by `simulate`.
CalibrationResult loadGroundTruth(const std::string& path);
void saveGroundTruth(const std::string& path, const CalibrationResult& truth);

// Full-precision calibration report; round-trips losslessly through JSON.
struct CalibrationReport {
  std::string method;
  Mat3 rotation = Mat3::Identity();  // R_S^TF
  Vec3 rotation_axis = Vec3::UnitZ();
  double rotation_angle_rad = 0.0;
  std::optional<double> mass;
  std::optional<Vec3> gravity;       // known input or estimated m*g
  bool gravity_is_mass_scaled = false;
  std::optional<Vec3> cog;
  std::optional<double> residual_force;
  std::optional<double> residual_torque;
  std::optional<double> residual;
  std::optional<double> nullspace_gap;
  std::optional<int> iterations_used;
  std::string input_digest;
};

nlohmann::json reportToJson(const CalibrationReport& report);
CalibrationReport reportFromJson(const nlohmann::json& j);

// FNV-1a 64-bit digest of the file bytes, lower-case hex.
std::string fileDigest(const std::string& path);

}  // namespace ftcal
