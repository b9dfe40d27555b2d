// driftguard: Metropolis-filtered random walks, discard bounds, and the 1D
// reflected-walk oracle from the command line.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "driftguard/bounds.hpp"
#include "driftguard/config.hpp"
#include "driftguard/density.hpp"
#include "driftguard/errors.hpp"
#include "driftguard/fisher.hpp"
#include "driftguard/harness.hpp"
#include "driftguard/oracle1d.hpp"

namespace {

using namespace driftguard;
using json = nlohmann::ordered_json;

constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;
constexpr int kExitContainment = 3;

struct SimulateArgs {
  std::string config;
  std::optional<std::int64_t> trials, steps;
  std::optional<std::uint64_t> seed;
  std::optional<int> dim;
  std::optional<double> half_width;
  std::optional<std::string> generator, out, format;
  std::optional<unsigned> threads;
};

int run_simulate(const SimulateArgs& a) {
  ExperimentConfig cfg = a.config.empty() ? config_from_json_text("{}") : load_config(a.config);
  std::string generator_name;
  if (a.dim || a.half_width) {
    const Eigen::Index d = a.dim ? *a.dim : cfg.body.dim();
    const double T = a.half_width ? *a.half_width : cfg.body.half_width(0);
    cfg.body = Box<double>::cube(d, T);
  }
  if (a.generator || cfg.generator.dimension != cfg.body.dim()) {
    const bool signs = cfg.generator.rademacher;
    std::string name = a.generator.value_or("");
    if (name.empty()) {
      switch (cfg.generator.kind) {
        case GeneratorKind::random_unit_sphere: name = "unit"; break;
        case GeneratorKind::isotropic_custom: name = "isotropic"; break;
        case GeneratorKind::coordinate_basis_cycle: name = "pm1"; break;
        case GeneratorKind::fixed_list:
          throw PreconditionError("--dim changes the dimension of a step-file generator; pass --generator");
      }
    }
    cfg.generator = generator_from_name(name, cfg.body.dim());
    cfg.generator.rademacher = signs;
  }
  if (a.trials) cfg.n_trials = *a.trials;
  if (a.steps) cfg.n_steps = *a.steps;
  if (a.seed) cfg.seed = *a.seed;
  if (a.out) cfg.output_path = *a.out;
  if (a.format) cfg.format = report_format_from_string(*a.format);
  if (a.threads) cfg.threads = *a.threads;

  const RunStats stats = run_experiment(cfg);
  const std::string report = emit_report(stats, cfg.format);
  if (cfg.output_path.empty()) {
    std::cout << report;
  } else {
    std::ofstream out(cfg.output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + cfg.output_path);
    out << report;
  }
  return 0;
}

json bound_json(const BoundReport& b) {
  return {{"kind", to_string(b.kind)}, {"value", b.value}, {"inputs_digest", b.inputs_digest}};
}

int run_bounds(int dim, double T, std::optional<std::int64_t> steps, const std::string& norms_arg) {
  std::vector<double> norms;
  if (!norms_arg.empty()) {
    if (norms_arg.rfind("file:", 0) != 0) throw PreconditionError("--norms expects file:<path>");
    norms = read_norm_file(norms_arg.substr(5));
  } else {
    if (!steps) throw PreconditionError("bounds: --steps is required without --norms");
    if (*steps < 0) throw PreconditionError("bounds: --steps must be >= 0");
    norms.assign(static_cast<std::size_t>(*steps), 1.0);
  }
  const auto n = static_cast<std::int64_t>(norms.size());
  const Box<double> box = Box<double>::cube(dim, T);

  std::vector<Eigen::VectorXd> vectors;
  vectors.reserve(norms.size());
  for (double r : norms) vectors.push_back(r * Eigen::VectorXd::Unit(dim, 0));

  std::cout << bound_json(upper_bound_general(fisher_closed_form_cube(box), vectors)).dump() << '\n';
  std::cout << bound_json(upper_bound_cube(T, norms)).dump() << '\n';
  std::cout << bound_json(isotropic_bound(box, n)).dump() << '\n';
  std::cout << bound_json(lower_bound_1d(static_cast<std::int64_t>(std::floor(T)), n)).dump() << '\n';
  return 0;
}

json indices_json(const std::vector<int>& idx) { return json(idx); }

int run_oracle(const std::string& mode, int T, std::optional<std::int64_t> n, std::optional<int> start,
               const std::string& signs) {
  using namespace driftguard::oracle1d;
  if (mode == "single") {
    if (signs.empty() && !(n && *n == 0)) throw PreconditionError("oracle single: --signs is required");
    const SignSequence eps = SignSequence::parse(signs);
    if (n && *n != eps.size()) throw PreconditionError("oracle single: --n does not match --signs length");
    const int s = start.value_or(0);
    const auto walk = reflected_walk(eps, T, s);
    json line{{"mode", "single"}, {"T", T}, {"n", eps.size()}, {"start", s}, {"signs", eps.to_string()},
              {"reflected", indices_json(walk.indices)}, {"reflected_length", walk.size()},
              {"discards", eps.size() - static_cast<int>(walk.size())}};
    if (eps.size() <= kMaxDpLength) line["longest"] = dp_longest_valid(eps, T, s);
    bool ok = true;
    if (eps.size() <= kMaxEnumerationLength) {
      const bool lex = verify_lex_optimality(eps, T, s);
      const bool shift = verify_start_shift(eps, T, s);
      line["lex_minimal"] = lex;
      line["start_shift"] = shift;
      ok = lex && shift;
    }
    std::cout << line.dump() << '\n';
    return ok ? 0 : kExitInvariant;
  }

  if (!n) throw PreconditionError("oracle: --n is required for mode " + mode);
  if (*n < 0) throw PreconditionError("oracle: --n must be >= 0");

  if (mode == "chain") {
    const StartDistribution dist = start ? StartDistribution::point(T, *start) : StartDistribution::uniform(T);
    const auto result = exact_chain_expectation(T, *n, dist);
    json line{{"mode", "chain"}, {"T", T}, {"n", *n}, {"start", dist.describe()},
              {"expected_discards", result.value}};
    line["exact"] = result.exact ? json(result.exact->str()) : json(nullptr);
    line["stationary_value"] = static_cast<double>(*n) / (2.0 * T + 1.0);
    line["lower_bound"] = lower_bound_1d(T, *n).value;
    std::cout << line.dump() << '\n';
    return 0;
  }

  if (mode == "exhaustive") {
    if (*n > kMaxEnumerationLength)
      throw PreconditionError("oracle exhaustive: --n must be <= " + std::to_string(kMaxEnumerationLength));
    const int len = static_cast<int>(*n);
    std::int64_t instances = 0, counterexamples = 0;
    const int s_lo = start ? *start : -T;
    const int s_hi = start ? *start : T;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) {
      const SignSequence eps = SignSequence::from_bits(len, mask);
      for (int s = s_lo; s <= s_hi; ++s) {
        const auto walk = reflected_walk(eps, T, s);
        const auto all = enumerate_longest_valid(eps, T, s);
        const bool lex = static_cast<int>(walk.size()) == all.longest && walk.indices == all.lex_smallest_longest;
        const bool shift = verify_start_shift(eps, T, s);
        ++instances;
        if (!lex || !shift) ++counterexamples;
        std::cout << json{{"signs", eps.to_string()}, {"start", s}, {"reflected", indices_json(walk.indices)},
                          {"reflected_length", walk.size()}, {"longest", all.longest},
                          {"lex_minimal", lex}, {"start_shift", shift}}
                         .dump()
                  << '\n';
      }
    }
    std::cout << json{{"mode", "exhaustive"}, {"T", T}, {"n", len}, {"instances", instances},
                      {"counterexamples", counterexamples}}
                     .dump()
              << '\n';
    return counterexamples == 0 ? 0 : kExitInvariant;
  }
  throw PreconditionError("oracle: unknown mode '" + mode + "'");
}

int run_fisher(int dim, double T, const std::string& method, int nodes, std::int64_t samples, std::uint64_t seed,
               unsigned threads) {
  const Box<double> box = Box<double>::cube(dim, T);
  const auto density = cube_eigen_density(box);
  FisherMatrix<double> fisher;
  if (method == "closed")
    fisher = fisher_closed_form_cube(box);
  else if (method == "quadrature")
    fisher = fisher_quadrature(*density, nodes);
  else if (method == "mc")
    fisher = fisher_monte_carlo(*density, samples, seed, threads);
  else
    throw PreconditionError("fisher: unknown method '" + method + "' (expected closed, quadrature, mc)");

  auto matrix_json = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  const bool psd = fisher.is_psd();
  json out{{"method", to_string(fisher.estimator_kind)}, {"dim", dim}, {"half_width", T},
           {"entries", matrix_json(fisher.entries)}};
  out["std_error"] = fisher.std_error ? matrix_json(*fisher.std_error) : json(nullptr);
  out["trace"] = fisher.trace();
  out["four_lambda1"] = 4.0 * dirichlet_lambda1_box(box);
  out["operator_norm"] = fisher.operator_norm();
  out["information_capacity"] = information_capacity(fisher);
  out["psd"] = psd;
  std::cout << out.dump(2) << '\n';
  return psd && fisher.is_symmetric() ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metropolis discarding filter for random walks in convex bodies"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs of the discarding filter");
  simulate->add_option("--config", sim.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  simulate->add_option("--trials", sim.trials, "number of trials");
  simulate->add_option("--steps", sim.steps, "steps per trial");
  simulate->add_option("--seed", sim.seed, "base seed");
  simulate->add_option("--dim", sim.dim, "dimension of the cube");
  simulate->add_option("--half-width", sim.half_width, "cube half-width T");
  simulate->add_option("--generator", sim.generator, "unit | isotropic | pm1 | file:<path>");
  simulate->add_option("--out", sim.out, "report path (stdout if omitted)");
  simulate->add_option("--format", sim.format, "csv | json");
  simulate->add_option("--threads", sim.threads, "worker threads (0 = all cores)");

  int b_dim = 1;
  double b_T = 1.0;
  std::optional<std::int64_t> b_steps;
  std::string b_norms;
  auto* bounds = app.add_subcommand("bounds", "print all closed-form discard bounds");
  bounds->add_option("--dim", b_dim, "dimension")->required();
  bounds->add_option("--half-width", b_T, "cube half-width T")->required();
  bounds->add_option("--steps", b_steps, "number of unit steps");
  bounds->add_option("--norms", b_norms, "file:<path> with one step norm per line");

  std::string o_mode;
  int o_T = 0;
  std::optional<std::int64_t> o_n;
  std::optional<int> o_start;
  std::string o_signs;
  auto* oracle = app.add_subcommand("oracle", "exact one-dimensional reflected-walk oracle (JSON lines)");
  oracle->add_option("--mode", o_mode, "exhaustive | chain | single")
      ->required()
      ->check(CLI::IsMember({"exhaustive", "chain", "single"}));
  oracle->add_option("--T", o_T, "integer half-width")->required();
  oracle->add_option("--n", o_n, "number of steps");
  oracle->add_option("--start", o_start, "starting point in [-T, T]");
  oracle->add_option("--signs", o_signs, "sign string such as +-+-");

  int f_dim = 1;
  double f_T = 1.0;
  std::string f_method;
  int f_nodes = 64;
  std::int64_t f_samples = 1000000;
  std::uint64_t f_seed = 1;
  unsigned f_threads = 1;
  auto* fisher = app.add_subcommand("fisher", "Fisher information of the cube eigen-density");
  fisher->add_option("--dim", f_dim, "dimension")->required();
  fisher->add_option("--half-width", f_T, "cube half-width T")->required();
  fisher->add_option("--method", f_method, "closed | quadrature | mc")
      ->required()
      ->check(CLI::IsMember({"closed", "quadrature", "mc"}));
  fisher->add_option("--nodes", f_nodes, "Gauss-Legendre nodes per axis");
  fisher->add_option("--samples", f_samples, "Monte Carlo samples");
  fisher->add_option("--seed", f_seed, "Monte Carlo seed");
  fisher->add_option("--threads", f_threads, "worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim);
    if (*bounds) return run_bounds(b_dim, b_T, b_steps, b_norms);
    if (*oracle) return run_oracle(o_mode, o_T, o_n, o_start, o_signs);
    if (*fisher) return run_fisher(f_dim, f_T, f_method, f_nodes, f_samples, f_seed, f_threads);
  } catch (const ContainmentViolation& e) {
    std::cerr << "containment violation: " << e.what() << '\n';
    return kExitContainment;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return 0;
}
