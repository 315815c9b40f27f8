#include "ftcal/eval_harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace ftcal {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t cellSeed(std::uint64_t base, std::uint64_t level, std::uint64_t rep) {
  return splitmix64(splitmix64(base ^ (level << 32)) ^ rep);
}

std::string formatDouble(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

std::string formatOptional(const std::optional<double>& v) {
  return v ? formatDouble(*v) : std::string();
}

SyntheticScenario makeScenario(const SweepSpec& spec, bool known_gravity,
                               double sigma_f, std::uint64_t seed) {
  Rng rng(seed);
  SyntheticScenario sc;
  sc.true_rotation = sampleRandomRotation(rng);
  if (known_gravity) {
    sc.mass = spec.known_gravity_mass;
    sc.gravity = Vec3(0.0, 0.0, -spec.known_gravity_norm);
  } else {
    std::normal_distribution<double> normal(0.0, spec.sigma_g);
    sc.mass = 1.0;  // unknown-gravity methods fold the mass into g
    sc.gravity = Vec3(normal(rng), normal(rng), normal(rng));
  }
  sc.noise_std_force = sigma_f;
  sc.num_poses = spec.num_poses;
  sc.rng_seed = splitmix64(seed ^ 0x5bf0361cULL);
  return sc;
}

double gravityRelError(const Vec3& est, const Vec3& truth) {
  return (est - truth).norm() / truth.norm();
}

double gravityDirectionError(const Vec3& est, const Vec3& truth) {
  const double c = est.dot(truth) / (est.norm() * truth.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

ErrorReport applyMethodAndCompare(Method method, const Dataset& data,
                                  const CalibrationResult& truth,
                                  const SweepSpec& spec) {
  switch (method) {
    case Method::Relaxation:
      return compareKnownGravity(calibrateRelaxation(data, truth.gravity), truth);
    case Method::CayleyTLS:
      return compareKnownGravity(
          calibrateCayley(data, truth.gravity, spec.mass_error_factor * truth.mass, true),
          truth);
    case Method::CayleyOLS:
      return compareKnownGravity(
          calibrateCayley(data, truth.gravity, spec.mass_error_factor * truth.mass, false),
          truth);
    case Method::Eigen:
      return compareUnknownGravity(calibrateEigen(data), truth);
    case Method::Nullspace:
      return compareUnknownGravity(calibrateNullspace(data), truth);
    case Method::Iterative: {
      IterativeOptions opt;
      opt.max_iters = spec.max_iters;
      opt.tol = spec.tol;
      return compareUnknownGravity(calibrateIterative(data, opt), truth);
    }
  }
  throw std::logic_error("unreachable method");
}

}  // namespace

std::string methodName(Method m) {
  switch (m) {
    case Method::Relaxation: return "relaxation";
    case Method::CayleyTLS: return "cayley_tls";
    case Method::CayleyOLS: return "cayley_ols";
    case Method::Eigen: return "eigen";
    case Method::Nullspace: return "nullspace";
    case Method::Iterative: return "iterative";
  }
  return "?";
}

std::optional<Method> methodFromName(const std::string& name) {
  for (Method m : {Method::Relaxation, Method::CayleyTLS, Method::CayleyOLS,
                   Method::Eigen, Method::Nullspace, Method::Iterative}) {
    if (methodName(m) == name) return m;
  }
  if (name == "cayley") return Method::CayleyTLS;
  return std::nullopt;
}

bool methodNeedsKnownGravity(Method m) {
  return m == Method::Relaxation || m == Method::CayleyTLS || m == Method::CayleyOLS;
}

ErrorReport compareKnownGravity(const KnownGravityEstimate& est,
                                const CalibrationResult& truth) {
  ErrorReport r;
  r.rotation_error_rad = rotationAngleBetween(est.rotation, truth.rotation);
  if (est.method == KnownGravityMethod::Relaxation) {
    r.mass_rel_error = std::abs(est.mass - truth.mass) / truth.mass;
  }
  return r;
}

ErrorReport compareUnknownGravity(const UnknownGravityEstimate& est,
                                  const CalibrationResult& truth) {
  ErrorReport r;
  r.rotation_error_rad =
      rotationAngleBetween(est.rotation_sensor_from_flange(), truth.rotation);
  const Vec3 g_true = truth.mass * truth.gravity;
  r.gravity_rel_error = gravityRelError(est.gravity_scaled, g_true);
  r.gravity_direction_error_rad = gravityDirectionError(est.gravity_scaled, g_true);
  return r;
}

std::vector<double> defaultNoiseGrid(double signal_scale) {
  std::vector<double> grid(8);
  // SNR from 1e4 down to 1, log-spaced.
  for (int i = 0; i < 8; ++i) {
    const double log_snr = 4.0 * (1.0 - i / 7.0);
    grid[static_cast<std::size_t>(i)] = signal_scale / std::pow(10.0, log_snr);
  }
  return grid;
}

std::vector<SweepCell> runNoiseSweep(const SweepSpec& spec) {
  if (spec.noise_levels.empty() || spec.num_repetitions < 1 || spec.methods.empty()) {
    throw std::invalid_argument("runNoiseSweep: invalid sweep spec");
  }
  for (double s : spec.noise_levels) {
    if (s < 0.0) throw std::invalid_argument("runNoiseSweep: negative noise level");
  }
  const bool known_gravity =
      std::all_of(spec.methods.begin(), spec.methods.end(), methodNeedsKnownGravity);
  std::vector<SweepCell> table;
  table.reserve(spec.noise_levels.size() * static_cast<std::size_t>(spec.num_repetitions) *
                spec.methods.size());
  for (std::size_t li = 0; li < spec.noise_levels.size(); ++li) {
    const double sigma_f = spec.noise_levels[li];
    for (int rep = 0; rep < spec.num_repetitions; ++rep) {
      const SyntheticScenario sc =
          makeScenario(spec, known_gravity, sigma_f,
                       cellSeed(spec.seed, li, static_cast<std::uint64_t>(rep)));
      const auto [data, truth] = generateDataset(sc);
      for (Method m : spec.methods) {
        SweepCell cell{m, sigma_f, rep, std::nullopt, ""};
        try {
          cell.report = applyMethodAndCompare(m, data, truth, spec);
        } catch (const CalibrationError& e) {
          cell.failure = e.name();
        }
        table.push_back(std::move(cell));
      }
    }
  }
  return table;
}

std::vector<TraceRow> runIterationTrace(const SweepSpec& spec) {
  if (spec.methods != std::vector<Method>{Method::Iterative}) {
    throw std::invalid_argument("runIterationTrace: methods must be exactly {Iterative}");
  }
  if (spec.noise_levels.empty() || spec.num_repetitions < 1) {
    throw std::invalid_argument("runIterationTrace: invalid sweep spec");
  }
  const double sigma_f = spec.noise_levels.front();
  std::vector<TraceRow> table;
  for (int rep = 0; rep < spec.num_repetitions; ++rep) {
    const std::uint64_t seed = cellSeed(spec.seed, 0, static_cast<std::uint64_t>(rep));
    const SyntheticScenario sc = makeScenario(spec, false, sigma_f, seed);
    const auto [data, truth] = generateDataset(sc);
    Rng rng(splitmix64(seed ^ 0x1ce9e1ULL));
    std::normal_distribution<double> normal(0.0, 1.0);
    IterativeOptions opt;
    opt.max_iters = spec.max_iters;
    opt.tol = spec.tol;
    opt.initial_gravity = Vec3(normal(rng), normal(rng), normal(rng));
    opt.observer = [&](int iter, const RotationMatrix& R, const Vec3& g) {
      UnknownGravityEstimate snapshot{R, g, UnknownGravityMethod::Iterative, iter,
                                      std::numeric_limits<double>::quiet_NaN(), 0.0};
      table.push_back({rep, iter, compareUnknownGravity(snapshot, truth)});
    };
    calibrateIterative(data, opt);  // NonConvergence propagates: must not happen
  }
  return table;
}

std::vector<AuditRow> runEquivalenceAudit(const SweepSpec& spec) {
  for (Method m : {Method::Eigen, Method::Nullspace, Method::Iterative}) {
    if (std::find(spec.methods.begin(), spec.methods.end(), m) == spec.methods.end()) {
      throw std::invalid_argument(
          "runEquivalenceAudit: methods must include eigen, nullspace and iterative");
    }
  }
  const double sigma_f = spec.noise_levels.empty() ? 0.0 : spec.noise_levels.front();
  std::vector<AuditRow> table;
  for (int rep = 0; rep < spec.num_repetitions; ++rep) {
    const SyntheticScenario sc = makeScenario(
        spec, false, sigma_f, cellSeed(spec.seed, 0, static_cast<std::uint64_t>(rep)));
    const auto [data, truth] = generateDataset(sc);
    struct Run {
      Method method;
      std::optional<UnknownGravityEstimate> est;
      std::string failure;
    };
    IterativeOptions opt;
    opt.max_iters = spec.max_iters;
    opt.tol = spec.tol;
    std::vector<Run> runs;
    for (Method m : {Method::Eigen, Method::Nullspace, Method::Iterative}) {
      Run run{m, std::nullopt, ""};
      try {
        run.est = m == Method::Eigen       ? calibrateEigen(data)
                  : m == Method::Nullspace ? calibrateNullspace(data)
                                           : calibrateIterative(data, opt);
      } catch (const CalibrationError& e) {
        run.failure = e.name();
      }
      runs.push_back(std::move(run));
    }
    for (std::size_t a = 0; a < runs.size(); ++a) {
      for (std::size_t b = a + 1; b < runs.size(); ++b) {
        AuditRow row;
        row.repetition = rep;
        row.method_a = runs[a].method;
        row.method_b = runs[b].method;
        if (runs[a].est && runs[b].est) {
          row.rotation_disagreement_rad =
              rotationAngleBetween(runs[a].est->rotation_flange_from_sensor,
                                   runs[b].est->rotation_flange_from_sensor);
          const Vec3& ga = runs[a].est->gravity_scaled;
          const Vec3& gb = runs[b].est->gravity_scaled;
          row.gravity_disagreement_rel = (ga - gb).norm() / (0.5 * (ga.norm() + gb.norm()));
        } else {
          row.failure = !runs[a].failure.empty() ? runs[a].failure : runs[b].failure;
        }
        table.push_back(std::move(row));
      }
    }
  }
  return table;
}

void writeSweepCsv(std::ostream& out, const std::vector<SweepCell>& table) {
  out << "method,sigma_f,repetition,status,rotation_error_rad,gravity_rel_error,"
         "gravity_direction_error_rad,mass_rel_error\r\n";
  for (const SweepCell& c : table) {
    out << methodName(c.method) << ',' << formatDouble(c.sigma_f) << ',' << c.repetition
        << ',';
    if (c.report) {
      out << "ok," << formatDouble(c.report->rotation_error_rad) << ','
          << formatOptional(c.report->gravity_rel_error) << ','
          << formatOptional(c.report->gravity_direction_error_rad) << ','
          << formatOptional(c.report->mass_rel_error);
    } else {
      out << "failed:" << c.failure << ",,,,";
    }
    out << "\r\n";
  }
}

void writeTraceCsv(std::ostream& out, const std::vector<TraceRow>& table) {
  out << "repetition,iteration,rotation_error_rad,gravity_rel_error,"
         "gravity_direction_error_rad\r\n";
  for (const TraceRow& r : table) {
    out << r.repetition << ',' << r.iteration << ','
        << formatDouble(r.report.rotation_error_rad) << ','
        << formatOptional(r.report.gravity_rel_error) << ','
        << formatOptional(r.report.gravity_direction_error_rad) << "\r\n";
  }
}

void writeAuditCsv(std::ostream& out, const std::vector<AuditRow>& table) {
  out << "repetition,method_a,method_b,status,rotation_disagreement_rad,"
         "gravity_disagreement_rel\r\n";
  for (const AuditRow& r : table) {
    out << r.repetition << ',' << methodName(r.method_a) << ',' << methodName(r.method_b)
        << ',';
    if (r.failure.empty()) {
      out << "ok," << formatOptional(r.rotation_disagreement_rad) << ','
          << formatOptional(r.gravity_disagreement_rel);
    } else {
      out << "failed:" << r.failure << ",,";
    }
    out << "\r\n";
  }
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double interquartileRange(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("iqr of empty set");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double q) {
    const double pos = q * (values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
  };
  return quantile(0.75) - quantile(0.25);
}

}  // namespace ftcal
