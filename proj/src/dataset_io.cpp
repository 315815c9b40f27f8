#include "ftcal/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ftcal {

namespace {

using nlohmann::json;

std::string formatDouble(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

// Row-major on the wire, column-ordered internally.
json matrixToJson(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}

Mat3 matrixFromJson(const json& a, const std::string& where) {
  if (!a.is_array() || a.size() != 9) {
    throw ParseError(where + ": orientation must be an array of 9 numbers");
  }
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = a.at(static_cast<std::size_t>(3 * r + c)).get<double>();
  return m;
}

json vectorToJson(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vectorFromJson(const json& a, const std::string& where) {
  if (!a.is_array() || a.size() != 3) {
    throw ParseError(where + ": expected an array of 3 numbers");
  }
  return Vec3(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>());
}

double orientationDeviation(const Mat3& m) {
  return std::max((m.transpose() * m - Mat3::Identity()).norm(),
                  std::abs(m.determinant() - 1.0));
}

RotationMatrix checkedOrientation(const Mat3& m, std::size_t sample_index) {
  const double dev = orientationDeviation(m);
  if (!m.allFinite() || dev > 1e-6) {
    throw InvalidOrientation(sample_index, dev);
  }
  return projectToSO3(m);
}

bool hasJsonExtension(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

bool hasCsvExtension(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

std::ifstream openForRead(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return in;
}

std::ofstream openForWrite(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  return out;
}

}  // namespace

Dataset loadDatasetJson(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("samples")) {
    throw ParseError("dataset: missing \"samples\" array");
  }
  if (j.value("schema_version", std::string(kDatasetSchemaVersion)) != kDatasetSchemaVersion) {
    throw ParseError("dataset: unsupported schema_version");
  }
  const json& samples = j.at("samples");
  if (!samples.is_array() || samples.empty()) {
    throw ParseError("dataset: empty dataset");
  }
  Dataset data;
  data.has_torque = true;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const json& s = samples.at(i);
    const std::string where = "sample " + std::to_string(i);
    if (!s.is_object() || !s.contains("orientation") || !s.contains("force")) {
      throw ParseError(where + ": needs \"orientation\" and \"force\"");
    }
    WrenchSample w{checkedOrientation(matrixFromJson(s.at("orientation"), where), i),
                   vectorFromJson(s.at("force"), where + " force"), Vec3::Zero()};
    if (s.contains("torque")) {
      w.torque = vectorFromJson(s.at("torque"), where + " torque");
    } else {
      data.has_torque = false;
    }
    data.samples.push_back(std::move(w));
  }
  return data;
}

Dataset loadDatasetCsv(std::istream& in) {
  Dataset data;
  data.has_torque = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t pos = 0;
        fields.push_back(std::stod(field, &pos));
        if (pos != field.find_last_not_of(" \t") + 1 && pos < field.size()) {
          throw std::invalid_argument(field);
        }
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number \"" + field + "\"");
      }
    }
    if (fields.size() != 12 && fields.size() != 15) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 12 or 15 columns, got " + std::to_string(fields.size()));
    }
    Mat3 m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = fields[static_cast<std::size_t>(3 * r + c)];
    WrenchSample w{checkedOrientation(m, data.samples.size()),
                   Vec3(fields[9], fields[10], fields[11]), Vec3::Zero()};
    if (fields.size() == 15) {
      w.torque = Vec3(fields[12], fields[13], fields[14]);
    } else {
      data.has_torque = false;
    }
    data.samples.push_back(std::move(w));
  }
  if (data.samples.empty()) throw ParseError("empty dataset");
  return data;
}

Dataset loadDataset(const std::string& path) {
  auto in = openForRead(path);
  if (hasCsvExtension(path)) return loadDatasetCsv(in);
  if (hasJsonExtension(path)) return loadDatasetJson(in);
  throw ParseError(path + ": unknown dataset extension (expected .json or .csv)");
}

void saveDatasetJson(std::ostream& out, const Dataset& data) {
  json samples = json::array();
  for (const WrenchSample& s : data.samples) {
    json js{{"orientation", matrixToJson(s.flange_orientation)},
            {"force", vectorToJson(s.force)}};
    if (data.has_torque) js["torque"] = vectorToJson(s.torque);
    samples.push_back(std::move(js));
  }
  out << json{{"schema_version", kDatasetSchemaVersion}, {"samples", samples}}.dump(2)
      << '\n';
}

void saveDatasetCsv(std::ostream& out, const Dataset& data) {
  for (const WrenchSample& s : data.samples) {
    const Mat3& m = s.flange_orientation.matrix();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out << formatDouble(m(r, c)) << ',';
    out << formatDouble(s.force.x()) << ',' << formatDouble(s.force.y()) << ','
        << formatDouble(s.force.z());
    if (data.has_torque) {
      out << ',' << formatDouble(s.torque.x()) << ',' << formatDouble(s.torque.y()) << ','
          << formatDouble(s.torque.z());
    }
    out << "\r\n";
  }
}

void saveDataset(const std::string& path, const Dataset& data) {
  auto out = openForWrite(path);
  if (hasCsvExtension(path)) {
    saveDatasetCsv(out, data);
  } else if (hasJsonExtension(path)) {
    saveDatasetJson(out, data);
  } else {
    throw std::invalid_argument(path + ": unknown dataset extension");
  }
}

CalibrationResult loadGroundTruth(const std::string& path) {
  auto in = openForRead(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("JSON parse error: ") + e.what());
  }
  CalibrationResult truth;
  truth.rotation = checkedOrientation(matrixFromJson(j.at("rotation"), "rotation"), 0);
  truth.mass = j.at("mass").get<double>();
  truth.gravity = vectorFromJson(j.at("gravity"), "gravity");
  truth.cog = vectorFromJson(j.at("cog"), "cog");
  return truth;
}

void saveGroundTruth(const std::string& path, const CalibrationResult& truth) {
  auto out = openForWrite(path);
  out << json{{"rotation", matrixToJson(truth.rotation)},
              {"mass", truth.mass},
              {"gravity", vectorToJson(truth.gravity)},
              {"cog", vectorToJson(truth.cog)}}
             .dump(2)
      << '\n';
}

nlohmann::json reportToJson(const CalibrationReport& report) {
  json j{{"method", report.method},
         {"rotation", matrixToJson(report.rotation)},
         {"rotation_axis", vectorToJson(report.rotation_axis)},
         {"rotation_angle_rad", report.rotation_angle_rad},
         {"gravity_is_mass_scaled", report.gravity_is_mass_scaled},
         {"input_digest", report.input_digest}};
  if (report.mass) j["mass"] = *report.mass;
  if (report.gravity) j["gravity"] = vectorToJson(*report.gravity);
  if (report.cog) j["cog"] = vectorToJson(*report.cog);
  if (report.residual_force) j["residual_force"] = *report.residual_force;
  if (report.residual_torque) j["residual_torque"] = *report.residual_torque;
  if (report.residual) j["residual"] = *report.residual;
  if (report.nullspace_gap && std::isfinite(*report.nullspace_gap)) {
    j["nullspace_gap"] = *report.nullspace_gap;
  }
  if (report.iterations_used) j["iterations_used"] = *report.iterations_used;
  return j;
}

CalibrationReport reportFromJson(const nlohmann::json& j) {
  CalibrationReport r;
  r.method = j.at("method").get<std::string>();
  r.rotation = matrixFromJson(j.at("rotation"), "rotation");
  r.rotation_axis = vectorFromJson(j.at("rotation_axis"), "rotation_axis");
  r.rotation_angle_rad = j.at("rotation_angle_rad").get<double>();
  r.gravity_is_mass_scaled = j.at("gravity_is_mass_scaled").get<bool>();
  r.input_digest = j.at("input_digest").get<std::string>();
  if (j.contains("mass")) r.mass = j.at("mass").get<double>();
  if (j.contains("gravity")) r.gravity = vectorFromJson(j.at("gravity"), "gravity");
  if (j.contains("cog")) r.cog = vectorFromJson(j.at("cog"), "cog");
  if (j.contains("residual_force")) r.residual_force = j.at("residual_force").get<double>();
  if (j.contains("residual_torque")) r.residual_torque = j.at("residual_torque").get<double>();
  if (j.contains("residual")) r.residual = j.at("residual").get<double>();
  if (j.contains("nullspace_gap")) r.nullspace_gap = j.at("nullspace_gap").get<double>();
  if (j.contains("iterations_used")) r.iterations_used = j.at("iterations_used").get<int>();
  return r;
}

std::string fileDigest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace ftcal
