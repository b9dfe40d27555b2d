#include "driftguard/harness.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "driftguard/density.hpp"
#include "driftguard/errors.hpp"
#include "driftguard/filter.hpp"
#include "driftguard/fisher.hpp"
#include "driftguard/parallel.hpp"

namespace driftguard {

namespace {

constexpr std::uint32_t kStepStreamTag = 0x53544550u;    // steps
constexpr std::uint32_t kFilterStreamTag = 0x46494c54u;  // filter coins

Vec uniform_unit_vector(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(d);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

}  // namespace

const char* to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::fixed_list: return "fixed_list";
    case GeneratorKind::random_unit_sphere: return "random_unit_sphere";
    case GeneratorKind::coordinate_basis_cycle: return "coordinate_basis_cycle";
    case GeneratorKind::isotropic_custom: return "isotropic_custom";
  }
  return "unknown";
}

std::vector<Vec> generate_steps(const StepGenerator& gen, std::int64_t n, std::uint64_t rng_seed) {
  if (n < 0) throw PreconditionError("generate_steps: n must be nonnegative");
  if (gen.dimension < 1) throw PreconditionError("generate_steps: dimension must be >= 1");
  const Eigen::Index d = gen.dimension;
  Rng rng(rng_seed);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));

  if (gen.kind == GeneratorKind::fixed_list) {
    if (gen.fixed.empty() && n > 0) throw PreconditionError("generate_steps: fixed_list is empty");
    for (const auto& v : gen.fixed)
      if (v.size() != d) throw PreconditionError("generate_steps: fixed_list vector has wrong dimension");
  }

  for (std::int64_t j = 0; j < n; ++j) {
    Vec v;
    switch (gen.kind) {
      case GeneratorKind::fixed_list:
        v = gen.fixed[static_cast<std::size_t>(j) % gen.fixed.size()];
        break;
      case GeneratorKind::random_unit_sphere:
        v = uniform_unit_vector(d, rng);
        break;
      case GeneratorKind::coordinate_basis_cycle:
        v = Vec::Unit(d, static_cast<Eigen::Index>(j % d));
        break;
      case GeneratorKind::isotropic_custom:
        if (gen.sampler) {
          v = gen.sampler(rng);
          if (v.size() != d) throw PreconditionError("generate_steps: custom sampler returned wrong dimension");
        } else {
          v = std::sqrt(static_cast<double>(d)) * uniform_unit_vector(d, rng);
        }
        break;
      default:
        throw PreconditionError("generate_steps: unknown generator kind");
    }
    if (gen.rademacher) v *= static_cast<double>(rademacher(rng));
    out.push_back(std::move(v));
  }
  return out;
}

void summarise(RunStats& stats) {
  const auto m = static_cast<double>(stats.per_trial_discards.size());
  if (m == 0) {
    stats.mean = 0.0;
    stats.std_error = 0.0;
    return;
  }
  double sum = 0.0;
  for (auto x : stats.per_trial_discards) sum += static_cast<double>(x);
  stats.mean = sum / m;
  if (m < 2) {
    stats.std_error = 0.0;
    return;
  }
  double ss = 0.0;
  for (auto x : stats.per_trial_discards) {
    const double dx = static_cast<double>(x) - stats.mean;
    ss += dx * dx;
  }
  stats.std_error = std::sqrt(ss / (m - 1.0) / m);
}

RunStats run_experiment(const ExperimentConfig& config) {
  if (config.n_trials < 1) throw PreconditionError("run_experiment: n_trials must be >= 1");
  if (config.n_steps < 0) throw PreconditionError("run_experiment: n_steps must be >= 0");
  if (config.generator.dimension != config.body.dim())
    throw PreconditionError("run_experiment: generator dimension does not match the body");

  const auto density = cube_eigen_density(config.body);
  std::optional<FisherMatrix<double>> fisher;
  if (config.body.is_cube())
    fisher = fisher_closed_form_cube(config.body);
  else if (config.body.dim() <= kMaxQuadratureDim)
    fisher = fisher_quadrature(*density, 64);

  struct TrialResult {
    std::int64_t discards = 0;
    double general_bound = 0.0;
    double l2_sum = 0.0;
    bool violated = false;
    std::string diagnostic;
  };
  const auto trials = static_cast<std::size_t>(config.n_trials);
  std::vector<TrialResult> results(trials);

  parallel_for(trials, config.threads, [&](std::size_t t) {
    auto& r = results[t];
    const auto steps = generate_steps(config.generator, config.n_steps,
                                      substream(config.seed, t, kStepStreamTag)());
    for (const auto& v : steps) {
      r.l2_sum += v.norm();
      if (fisher) r.general_bound += 0.5 * direction_information(*fisher, v);
    }
    try {
      const auto traj = filter_run<double>(density, steps, substream(config.seed, t, kFilterStreamTag)());
      r.discards = traj.discards();
    } catch (const ContainmentViolation& e) {
      r.violated = true;
      r.diagnostic = "trial " + std::to_string(t) + ": " + e.what();
    }
  });

  RunStats stats;
  std::string first_diagnostic;
  double general_total = 0.0, l2_total = 0.0;
  for (const auto& r : results) {
    if (r.violated) {
      ++stats.containment_violations;
      if (first_diagnostic.empty()) first_diagnostic = r.diagnostic;
    }
    stats.per_trial_discards.push_back(r.discards);
    general_total += r.general_bound;
    l2_total += r.l2_sum;
  }
  if (stats.containment_violations > 0)
    throw ContainmentViolation(std::to_string(stats.containment_violations) +
                               " trial(s) violated 2K containment; first: " + first_diagnostic);
  summarise(stats);

  const double m = static_cast<double>(config.n_trials);
  std::ostringstream tag;
  tag << " trials=" << config.n_trials << " generator=" << to_string(config.generator.kind);
  if (fisher) {
    std::ostringstream digest;
    digest << "n=" << config.n_steps << " d=" << config.body.dim()
           << " fisher=" << to_string(fisher->estimator_kind) << tag.str() << " (trial mean)";
    stats.bound_reports.push_back({BoundKind::general_fisher, general_total / m, digest.str()});
  }
  if (config.body.is_cube()) {
    const double T = config.body.half_width(0);
    std::ostringstream digest;
    digest << "n=" << config.n_steps << " T=" << T << " mean_sum_l2=" << l2_total / m << tag.str();
    stats.bound_reports.push_back({BoundKind::cube_l2, detail::kPi / (2.0 * T) * (l2_total / m), digest.str()});
  }
  stats.bound_reports.push_back(isotropic_bound(config.body, config.n_steps));
  if (config.body.dim() == 1 && config.generator.kind == GeneratorKind::coordinate_basis_cycle) {
    // +-1 steps: |sum| <= T is the same constraint as |sum| <= floor(T).
    stats.bound_reports.push_back(
        lower_bound_1d(static_cast<std::int64_t>(std::floor(config.body.half_width(0))), config.n_steps));
  }
  return stats;
}

std::vector<Vec> read_step_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open step file: " + path);
  std::vector<Vec> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::vector<double> values;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(x))
        throw PreconditionError(path + ":" + std::to_string(lineno) + ": bad number '" + token + "'");
      values.push_back(x);
    }
    if (!out.empty() && static_cast<Eigen::Index>(values.size()) != out.front().size())
      throw PreconditionError(path + ":" + std::to_string(lineno) + ": inconsistent dimension");
    out.push_back(Eigen::Map<const Vec>(values.data(), static_cast<Eigen::Index>(values.size())));
  }
  return out;
}

std::vector<double> read_norm_file(const std::string& path) {
  std::vector<double> norms;
  for (const auto& v : read_step_file(path)) {
    if (v.size() != 1) throw PreconditionError(path + ": expected one norm per line");
    if (v[0] < 0.0) throw PreconditionError(path + ": norms must be nonnegative");
    norms.push_back(v[0]);
  }
  return norms;
}

StepGenerator generator_from_name(const std::string& name, Eigen::Index dim) {
  StepGenerator gen;
  gen.dimension = dim;
  gen.rademacher = true;
  if (name == "unit") {
    gen.kind = GeneratorKind::random_unit_sphere;
  } else if (name == "isotropic") {
    gen.kind = GeneratorKind::isotropic_custom;
  } else if (name == "pm1") {
    gen.kind = GeneratorKind::coordinate_basis_cycle;
  } else if (name.rfind("file:", 0) == 0) {
    gen.kind = GeneratorKind::fixed_list;
    gen.fixed = read_step_file(name.substr(5));
    if (!gen.fixed.empty() && gen.fixed.front().size() != dim)
      throw PreconditionError("step file dimension does not match --dim");
  } else {
    throw PreconditionError("unknown generator '" + name + "' (expected unit, isotropic, pm1, file:<path>)");
  }
  return gen;
}

}  // namespace driftguard
