#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "driftguard/bounds.hpp"
#include "driftguard/box.hpp"
#include "driftguard/random.hpp"

namespace driftguard {

using Vec = Eigen::VectorXd;

enum class GeneratorKind { fixed_list, random_unit_sphere, coordinate_basis_cycle, isotropic_custom };

const char* to_string(GeneratorKind kind);

/// Source of step vectors v_j. With `rademacher` set each generated vector is
/// multiplied by an independent fair sign before it reaches the filter.
struct StepGenerator {
  GeneratorKind kind = GeneratorKind::random_unit_sphere;
  Eigen::Index dimension = 1;
  bool rademacher = true;
  /// fixed_list: the vectors, cycled when n exceeds their count.
  std::vector<Vec> fixed;
  /// isotropic_custom: optional sampler; when empty, sqrt(d) times a uniform
  /// unit vector, which has second moment equal to the identity.
  std::function<Vec(Rng&)> sampler;
};

/// Deterministic given the seed.
std::vector<Vec> generate_steps(const StepGenerator& gen, std::int64_t n, std::uint64_t rng_seed);

enum class DensityKind { cube_eigen };

enum class ReportFormat { csv, json };

struct ExperimentConfig {
  Box<double> body = Box<double>::cube(1, 1.0);
  DensityKind density_kind = DensityKind::cube_eigen;
  StepGenerator generator;
  std::int64_t n_steps = 0;
  std::int64_t n_trials = 1;
  std::uint64_t seed = 0;
  std::string output_path;
  ReportFormat format = ReportFormat::json;
  unsigned threads = 1;
};

struct RunStats {
  std::vector<std::int64_t> per_trial_discards;
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<BoundReport> bound_reports;
  std::int64_t containment_violations = 0;

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

/// Mean and standard error of the mean of the per-trial counts.
void summarise(RunStats& stats);

/// Runs n_trials independent filter runs. Trial t draws its steps and its
/// filter coins from substreams of (seed, t). Throws ContainmentViolation if
/// any accepted partial sum ever leaves 2K.
RunStats run_experiment(const ExperimentConfig& config);

std::string emit_report(const RunStats& stats, ReportFormat format);
RunStats parse_report_json(const std::string& text);

/// Step file: one vector per line, whitespace-separated decimals. Blank
/// lines and lines starting with '#' are skipped.
std::vector<Vec> read_step_file(const std::string& path);
/// One nonnegative real per line.
std::vector<double> read_norm_file(const std::string& path);

/// Builds a generator from the CLI spelling: unit, isotropic, pm1, file:<path>.
StepGenerator generator_from_name(const std::string& name, Eigen::Index dim);

}  // namespace driftguard
