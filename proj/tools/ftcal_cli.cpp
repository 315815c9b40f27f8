// Command-line front end: dataset simulation, calibration, and the
// Monte-Carlo evaluation subcommands (sweep / trace / audit).
//
// Exit codes: 0 success, 1 estimator/data error, 2 usage or parse error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ftcal/calib_known_gravity.hpp"
#include "ftcal/calib_unknown_gravity.hpp"
#include "ftcal/dataset_io.hpp"
#include "ftcal/eval_harness.hpp"
#include "ftcal/model_sim.hpp"

namespace {

using namespace ftcal;

Vec3 parseVec3(const std::string& text, const std::string& flag) {
  std::stringstream ss(text);
  std::string field;
  std::vector<double> vals;
  while (std::getline(ss, field, ',')) {
    try {
      vals.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "expected x,y,z with numeric components");
    }
  }
  if (vals.size() != 3) {
    throw CLI::ValidationError(flag, "expected exactly 3 comma-separated components");
  }
  return Vec3(vals[0], vals[1], vals[2]);
}

std::vector<Method> parseMethods(const std::string& text) {
  std::vector<Method> methods;
  std::stringstream ss(text);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto m = methodFromName(name);
    if (!m) throw CLI::ValidationError("--methods", "unknown method \"" + name + "\"");
    methods.push_back(*m);
  }
  if (methods.empty()) throw CLI::ValidationError("--methods", "no methods given");
  return methods;
}

std::ofstream openOutput(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

struct SimulateArgs {
  std::uint64_t seed = 0;
  int poses = 100;
  double mass = 1.0;
  std::string gravity = "0,0,-9.81";
  bool random_gravity = false;
  double sigma_g = 100.0;
  std::string cog = "0,0,0";
  double noise_force = 0.0;
  double noise_torque = -1.0;
  std::string output;
  std::string truth_path;
};

int runSimulate(const SimulateArgs& args) {
  SyntheticScenario sc;
  Rng setup(args.seed ^ 0x51d0a7ecULL);
  sc.true_rotation = sampleRandomRotation(setup);
  sc.mass = args.mass;
  if (args.random_gravity) {
    std::normal_distribution<double> normal(0.0, args.sigma_g);
    sc.gravity = Vec3(normal(setup), normal(setup), normal(setup));
  } else {
    sc.gravity = parseVec3(args.gravity, "--gravity");
  }
  sc.cog = parseVec3(args.cog, "--cog");
  sc.noise_std_force = args.noise_force;
  if (args.noise_torque >= 0.0) sc.noise_std_torque = args.noise_torque;
  sc.num_poses = args.poses;
  sc.rng_seed = args.seed;
  const auto [data, truth] = generateDataset(sc);
  saveDataset(args.output, data);
  if (!args.truth_path.empty()) saveGroundTruth(args.truth_path, truth);
  std::cout << "wrote " << data.size() << " samples to " << args.output << '\n';
  return 0;
}

struct CalibrateArgs {
  std::string method = "eigen";
  std::string input;
  std::string output;
  std::optional<std::string> gravity;
  std::optional<double> mass;
  bool estimate_cog = false;
  bool no_tls = false;
  double tol = 1e-10;
  int max_iters = 50;
};

CalibrationReport baseReport(const std::string& method, const Mat3& rotation,
                             const std::string& input_path) {
  CalibrationReport report;
  report.method = method;
  report.rotation = rotation;
  const Eigen::AngleAxisd aa(rotation);
  report.rotation_axis = aa.axis();
  report.rotation_angle_rad = aa.angle();
  report.input_digest = fileDigest(input_path);
  return report;
}

int runCalibrate(const CalibrateArgs& args) {
  const auto method = methodFromName(args.method);
  if (!method) throw CLI::ValidationError("--method", "unknown method \"" + args.method + "\"");
  const bool known_g = methodNeedsKnownGravity(*method);
  if (known_g && !args.gravity) {
    throw CLI::RequiredError("--gravity (required by method " + args.method + ")");
  }
  const bool is_cayley = *method == Method::CayleyTLS || *method == Method::CayleyOLS;
  if (is_cayley && !args.mass) {
    throw CLI::RequiredError("--mass (required by method cayley)");
  }
  const Dataset data = loadDataset(args.input);

  CalibrationReport report;
  Vec3 gravity = Vec3::Zero();
  if (args.gravity) gravity = parseVec3(*args.gravity, "--gravity");

  std::optional<double> mass_for_cog = args.mass;
  switch (*method) {
    case Method::Relaxation: {
      const auto est = calibrateRelaxation(data, gravity);
      report = baseReport("relaxation", est.rotation, args.input);
      report.mass = est.mass;
      report.gravity = gravity;
      report.residual_force = est.residual_force;
      if (!mass_for_cog) mass_for_cog = est.mass;
      break;
    }
    case Method::CayleyTLS:
    case Method::CayleyOLS: {
      const bool tls = *method == Method::CayleyTLS && !args.no_tls;
      const auto est = calibrateCayley(data, gravity, *args.mass, tls);
      report = baseReport(tls ? "cayley_tls" : "cayley_ols", est.rotation, args.input);
      report.mass = est.mass;
      report.gravity = gravity;
      report.residual_force = est.residual_force;
      break;
    }
    case Method::Eigen:
    case Method::Nullspace:
    case Method::Iterative: {
      UnknownGravityEstimate est;
      if (*method == Method::Eigen) {
        est = calibrateEigen(data);
      } else if (*method == Method::Nullspace) {
        est = calibrateNullspace(data);
      } else {
        IterativeOptions opt;
        opt.max_iters = args.max_iters;
        opt.tol = args.tol;
        est = calibrateIterative(data, opt);
      }
      report = baseReport(methodName(*method), est.rotation_sensor_from_flange(), args.input);
      report.gravity = est.gravity_scaled;
      report.gravity_is_mass_scaled = true;
      report.residual = est.residual;
      if (*method == Method::Nullspace) report.nullspace_gap = est.nullspace_gap;
      if (*method == Method::Iterative) report.iterations_used = est.iterations_used;
      break;
    }
  }

  if (args.estimate_cog) {
    if (!data.has_torque) {
      throw CLI::ValidationError("--estimate-cog", "input dataset has no torque columns");
    }
    if (!args.gravity) {
      throw CLI::RequiredError("--gravity (required by --estimate-cog)");
    }
    if (!mass_for_cog) {
      throw CLI::RequiredError("--mass (required by --estimate-cog with this method)");
    }
    const auto cog = estimateCog(data, RotationMatrix::unchecked(report.rotation), gravity,
                                 *mass_for_cog);
    report.cog = cog.cog;
    report.residual_torque = cog.residual_torque;
  }

  const auto j = reportToJson(report);
  if (args.output.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    openOutput(args.output) << j.dump(2) << '\n';
  }
  return 0;
}

struct HarnessArgs {
  std::string methods;
  std::string noise;  // comma separated sigma_f list; empty -> default grid
  int reps = 100;
  int poses = 100;
  std::uint64_t seed = 0;
  double mass_error_factor = 1.0;
  double sigma_g = 100.0;
  double snr = -1.0;  // when > 0, sigma_f = sigma_g / snr
  double tol = 1e-10;
  int max_iters = 50;
  std::string output;
};

SweepSpec makeSpec(const HarnessArgs& args, std::vector<Method> methods) {
  SweepSpec spec;
  spec.methods = std::move(methods);
  spec.num_repetitions = args.reps;
  spec.num_poses = args.poses;
  spec.seed = args.seed;
  spec.mass_error_factor = args.mass_error_factor;
  spec.sigma_g = args.sigma_g;
  spec.max_iters = args.max_iters;
  spec.tol = args.tol;
  if (!args.noise.empty()) {
    std::stringstream ss(args.noise);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        spec.noise_levels.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw CLI::ValidationError("--noise", "bad noise level \"" + field + "\"");
      }
    }
  } else if (args.snr > 0.0) {
    spec.noise_levels = {args.sigma_g / args.snr};
  } else {
    const bool known = std::all_of(spec.methods.begin(), spec.methods.end(),
                                   methodNeedsKnownGravity);
    spec.noise_levels = defaultNoiseGrid(known ? 9.81 : args.sigma_g);
  }
  return spec;
}

template <typename Table, typename Writer>
int emitCsv(const Table& table, Writer writer, const std::string& output) {
  if (output.empty()) {
    writer(std::cout, table);
  } else {
    auto out = openOutput(output);
    writer(out, table);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Force/torque sensor calibration toolkit"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_option("--poses", sim.poses, "Number of poses (>= 4)");
  simulate->add_option("--mass", sim.mass, "True payload mass [kg]");
  simulate->add_option("--gravity", sim.gravity, "Gravity vector x,y,z [m/s^2]");
  simulate->add_flag("--random-gravity", sim.random_gravity,
                     "Draw gravity iid Gaussian with std --sigma-g instead of --gravity");
  simulate->add_option("--sigma-g", sim.sigma_g, "Std of random gravity components");
  simulate->add_option("--cog", sim.cog, "Center of gravity x,y,z [m]");
  simulate->add_option("--noise-force", sim.noise_force, "Force noise std [N]");
  simulate->add_option("--noise-torque", sim.noise_torque,
                       "Torque noise std [N*m] (default: same as force)");
  simulate->add_option("--output", sim.output, "Dataset path (.json or .csv)")->required();
  simulate->add_option("--truth", sim.truth_path, "Ground-truth JSON path");

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Run an estimator on a dataset");
  calibrate
      ->add_option("--method", cal.method,
                   "relaxation|cayley|eigen|nullspace|iterative")
      ->required();
  calibrate->add_option("--input", cal.input, "Dataset path")->required();
  calibrate->add_option("--output", cal.output, "Report JSON path (default: stdout)");
  std::string cal_gravity, cal_mass;
  calibrate->add_option("--gravity", cal_gravity, "Known gravity x,y,z [m/s^2]");
  double cal_mass_value = 0.0;
  auto* mass_opt = calibrate->add_option("--mass", cal_mass_value, "Known mass [kg]");
  calibrate->add_flag("--estimate-cog", cal.estimate_cog,
                      "Also estimate the center of gravity from torques");
  calibrate->add_flag("--no-tls", cal.no_tls, "Use plain least squares for cayley");
  calibrate->add_option("--tol", cal.tol, "Iterative convergence tolerance [rad]");
  calibrate->add_option("--max-iters", cal.max_iters, "Iterative iteration cap");

  auto addHarnessFlags = [](CLI::App* cmd, HarnessArgs& args, bool with_methods) {
    if (with_methods) {
      cmd->add_option("--methods", args.methods, "Comma-separated method list")->required();
    }
    cmd->add_option("--noise", args.noise, "Comma-separated sigma_f list");
    cmd->add_option("--snr", args.snr, "Single noise level as sigma_g / snr");
    cmd->add_option("--reps", args.reps, "Repetitions per noise level");
    cmd->add_option("--poses", args.poses, "Poses per dataset");
    cmd->add_option("--seed", args.seed, "Master seed");
    cmd->add_option("--mass-error-factor", args.mass_error_factor,
                    "Mass handed to cayley = factor * true mass");
    cmd->add_option("--sigma-g", args.sigma_g, "Std of random gravity components");
    cmd->add_option("--tol", args.tol, "Iterative convergence tolerance [rad]");
    cmd->add_option("--max-iters", args.max_iters, "Iterative iteration cap");
    cmd->add_option("--output", args.output, "CSV path (default: stdout)");
  };

  HarnessArgs sweep_args, trace_args, audit_args;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo noise sweep (CSV)");
  addHarnessFlags(sweep, sweep_args, true);
  auto* trace = app.add_subcommand("trace", "Per-iteration error traces (CSV)");
  addHarnessFlags(trace, trace_args, false);
  auto* audit = app.add_subcommand("audit", "Method equivalence audit (CSV)");
  addHarnessFlags(audit, audit_args, false);

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return runSimulate(sim);
    if (calibrate->parsed()) {
      if (!cal_gravity.empty()) cal.gravity = cal_gravity;
      if (mass_opt->count() > 0) cal.mass = cal_mass_value;
      return runCalibrate(cal);
    }
    if (sweep->parsed()) {
      const auto spec = makeSpec(sweep_args, parseMethods(sweep_args.methods));
      return emitCsv(runNoiseSweep(spec),
                     [](std::ostream& o, const auto& t) { writeSweepCsv(o, t); },
                     sweep_args.output);
    }
    if (trace->parsed()) {
      const auto spec = makeSpec(trace_args, {Method::Iterative});
      return emitCsv(runIterationTrace(spec),
                     [](std::ostream& o, const auto& t) { writeTraceCsv(o, t); },
                     trace_args.output);
    }
    if (audit->parsed()) {
      const auto spec =
          makeSpec(audit_args, {Method::Eigen, Method::Nullspace, Method::Iterative});
      return emitCsv(runEquivalenceAudit(spec),
                     [](std::ostream& o, const auto& t) { writeAuditCsv(o, t); },
                     audit_args.output);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const CalibrationError& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
