#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace ftcal {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Base class for every typed estimation failure. The name is stable and is
// what the CLI prints and what failed sweep cells record.
class CalibrationError : public std::runtime_error {
 public:
  CalibrationError(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class RankDeficient : public CalibrationError {
 public:
  explicit RankDeficient(double condition_estimate, const std::string& what)
      : CalibrationError("RankDeficient", what),
        condition_estimate(condition_estimate) {}
  double condition_estimate;
};

class DegenerateInput : public CalibrationError {
 public:
  explicit DegenerateInput(const std::string& what)
      : CalibrationError("DegenerateInput", what) {}
};

class SingularRotation : public CalibrationError {
 public:
  explicit SingularRotation(const std::string& what)
      : CalibrationError("SingularRotation", what) {}
};

class NoTLSSolution : public CalibrationError {
 public:
  explicit NoTLSSolution(const std::string& what)
      : CalibrationError("NoTLSSolution", what) {}
};

class AmbiguousNullspace : public CalibrationError {
 public:
  explicit AmbiguousNullspace(const std::string& what)
      : CalibrationError("AmbiguousNullspace", what) {}
};

class AmbiguousEigenvalue : public CalibrationError {
 public:
  explicit AmbiguousEigenvalue(const std::string& what)
      : CalibrationError("AmbiguousEigenvalue", what) {}
};

class NonPositiveMass : public CalibrationError {
 public:
  explicit NonPositiveMass(const std::string& what)
      : CalibrationError("NonPositiveMass", what) {}
};

}  // namespace ftcal
