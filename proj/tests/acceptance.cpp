// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
// Every stochastic criterion draws from substreams of kSuiteSeed, fixed
// before any criterion was run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <string>
#include <vector>

#include "driftguard/bounds.hpp"
#include "driftguard/density.hpp"
#include "driftguard/filter.hpp"
#include "driftguard/fisher.hpp"
#include "driftguard/harness.hpp"
#include "driftguard/oracle1d.hpp"
#include "test_support.hpp"

using namespace driftguard;
using json = nlohmann::ordered_json;
using std::numbers::pi;

namespace {

constexpr std::uint64_t kSuiteSeed = 20261016;

struct Outcome {
  bool pass = false;
  json report;  // measured values; compared byte-for-byte by the determinism criterion
};

Vec vec1(double x) { return Vec::Constant(1, x); }

// 1. d=3, T=16, n=1e4 unit steps with fair signs, 200 trials.
Outcome cube_headline(int threads) {
  ExperimentConfig cfg;
  cfg.body = Box<double>::cube(3, 16.0);
  cfg.generator = generator_from_name("unit", 3);
  cfg.n_steps = 10000;
  cfg.n_trials = 200;
  cfg.seed = kSuiteSeed;
  cfg.threads = threads;
  const RunStats stats = run_experiment(cfg);

  // Independent containment sweep: every accepted partial sum, max-norm <= 2T, no slack.
  const auto density = cube_eigen_density(cfg.body);
  std::int64_t violations = stats.containment_violations;
  double worst = 0.0;
  for (std::int64_t t = 0; t < cfg.n_trials; ++t) {
    const auto steps = generate_steps(cfg.generator, cfg.n_steps, substream(kSuiteSeed, t, 101)());
    MetropolisFilter<double> f(density, substream(kSuiteSeed, t, 102)());
    for (const auto& v : steps) {
      f.step(v);
      const double m = f.accepted_sum().cwiseAbs().maxCoeff();
      worst = std::max(worst, m);
      if (m > 32.0) ++violations;
    }
  }
  const double bound = upper_bound_cube(16.0, std::vector<double>(10000, 1.0)).value;
  Outcome out;
  out.pass = violations == 0 && stats.mean <= 982.0 + 3 * stats.std_error && bound < 982.0;
  out.report = {{"mean", stats.mean}, {"std_error", stats.std_error}, {"bound", bound},
                {"violations", violations}, {"worst_max_norm", worst}, {"report", emit_report(stats, ReportFormat::json)}};
  return out;
}

// 2. d=2, T=4, 50 fixed step sets of mixed norms, 100 sign draws each.
Outcome general_fisher_bound() {
  const Box<double> box = Box<double>::cube(2, 4.0);
  const auto fisher = fisher_closed_form_cube(box);
  Rng rng = substream(kSuiteSeed, 2, 200);
  std::uniform_real_distribution<double> norm_dist(0.05, 3.0);
  std::uniform_real_distribution<double> angle_dist(0.0, 2 * pi);
  Outcome out{true, json::array()};
  for (int set = 0; set < 50; ++set) {
    ExperimentConfig cfg;
    cfg.body = box;
    cfg.generator.kind = GeneratorKind::fixed_list;
    cfg.generator.dimension = 2;
    cfg.generator.rademacher = true;
    for (int j = 0; j < 1000; ++j) {
      const double r = norm_dist(rng), a = angle_dist(rng);
      cfg.generator.fixed.push_back(Vec(Eigen::Vector2d(r * std::cos(a), r * std::sin(a))));
    }
    cfg.n_steps = 1000;
    cfg.n_trials = 100;
    cfg.seed = substream(kSuiteSeed, static_cast<std::uint64_t>(set), 201)();
    const RunStats stats = run_experiment(cfg);
    const double bound = upper_bound_general(fisher, cfg.generator.fixed).value;
    const bool ok = stats.mean <= bound + 3 * stats.std_error;
    out.pass = out.pass && ok;
    out.report.push_back({{"set", set}, {"mean", stats.mean}, {"se", stats.std_error}, {"bound", bound}});
  }
  return out;
}

// 3. d=1, T=1: exact rejection rate vs chain frequency, and vs the Fisher bound.
Outcome rejection_identity() {
  const auto density = cube_eigen_density(Box<double>::cube(1, 1.0));
  Outcome out{true, json::array()};
  for (double v : {0.05, 0.1, 0.2, 0.4}) {
    const double exact = rejection_rate_exact_1d(*density, v, 1024);
    const auto est = estimate_rejection_rate<double>(density, vec1(v), 1000000,
                                                     substream(kSuiteSeed, static_cast<std::uint64_t>(v * 100), 300)());
    const bool ok = std::abs(est.frequency - exact) <= 3 * est.std_error && exact <= pi * v / 2;
    out.pass = out.pass && ok;
    out.report.push_back({{"v", v}, {"quadrature", exact}, {"empirical", est.frequency}, {"se", est.std_error},
                          {"bound", pi * v / 2}});
  }
  return out;
}

// 4. Quadrature and Monte Carlo Fisher matrices against (pi^2 / T^2) I and 4 lambda_1.
Outcome fisher_agreement(int threads) {
  Outcome out{true, json::array()};
  std::uint64_t stream = 0;
  for (double T : {1.0, 2.0, 16.0}) {
    for (int d : {1, 2}) {
      const Box<double> box = Box<double>::cube(d, T);
      const auto density = cube_eigen_density(box);
      const Eigen::MatrixXd target = (pi * pi / (T * T)) * Eigen::MatrixXd::Identity(d, d);
      const auto quad = fisher_quadrature(*density, 128);
      const auto mc = fisher_monte_carlo(*density, 1000000, substream(kSuiteSeed, stream++, 400)(), threads);
      const double quad_err = (quad.entries - target).cwiseAbs().maxCoeff();
      const double trace_err = std::abs(quad.trace() - 4 * dirichlet_lambda1_box(box));
      const double mc_z = ((mc.entries - target).cwiseAbs().array() / mc.std_error->array()).maxCoeff();
      const bool ok = quad_err <= 1e-6 && trace_err <= 1e-5 && mc_z <= 3.0 && quad.is_psd() && mc.is_psd();
      out.pass = out.pass && ok;
      out.report.push_back({{"T", T}, {"d", d}, {"quad_max_err", quad_err}, {"trace_err", trace_err},
                            {"mc_max_z", mc_z}, {"mc_diag0", mc.entries(0, 0)}, {"ok", ok}});
    }
  }
  return out;
}

// 5. Exhaustive reflected-walk optimality, n <= 10, T in {1,2,3}, all starts.
Outcome reflected_optimality() {
  std::int64_t instances = 0, counterexamples = 0;
  for (int n = 0; n <= 10; ++n)
    for (int T = 1; T <= 3; ++T)
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto eps = oracle1d::SignSequence::from_bits(n, mask);
        for (int s = -T; s <= T; ++s) {
          const auto walk = oracle1d::reflected_walk(eps, T, s);
          const auto brute = oracle1d::enumerate_longest_valid(eps, T, s);
          ++instances;
          if (static_cast<int>(walk.size()) != brute.longest || walk.indices != brute.lex_smallest_longest ||
              !oracle1d::is_valid_subsequence(eps, T, s, walk.indices))
            ++counterexamples;
        }
      }
  return {counterexamples == 0, {{"instances", instances}, {"counterexamples", counterexamples}}};
}

// 6. Exhaustive start-shift inequality, n <= 10, T <= 3, brute-force lengths.
Outcome start_shift() {
  std::int64_t instances = 0, counterexamples = 0;
  for (int n = 0; n <= 10; ++n)
    for (int T = 0; T <= 3; ++T)
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto eps = oracle1d::SignSequence::from_bits(n, mask);
        const int from_zero = oracle1d::enumerate_longest_valid(eps, T, 0).longest;
        for (int s = -T; s <= T; ++s) {
          ++instances;
          if (from_zero > oracle1d::enumerate_longest_valid(eps, T, s).longest + std::abs(s)) ++counterexamples;
        }
      }
  return {counterexamples == 0, {{"instances", instances}, {"counterexamples", counterexamples}}};
}

// 7. Uniform start: expected discards exactly n / (2T + 1).
Outcome stationary_identity() {
  Outcome out{true, json::array()};
  for (int T = 1; T <= 8; ++T)
    for (std::int64_t n : {1, 10, 1000}) {
      const auto r = oracle1d::exact_chain_expectation(T, n, oracle1d::StartDistribution::uniform(T));
      const bool ok = r.exact && *r.exact == oracle1d::Rational(n, 2 * T + 1);
      out.pass = out.pass && ok;
      out.report.push_back({{"T", T}, {"n", n}, {"exact", r.exact ? r.exact->str() : "none"}});
    }
  return out;
}

// 8. Start at 0: exact expectation >= n / (2T + 1) - T, and Monte Carlo agrees.
Outcome lower_bound() {
  Outcome out{true, json::array()};
  const std::int64_t n = 10000;
  for (int T = 1; T <= 8; ++T) {
    const auto start = oracle1d::StartDistribution::point(T, 0);
    const auto r = oracle1d::exact_chain_expectation(T, n, start);
    const oracle1d::Rational bound = oracle1d::Rational(n, 2 * T + 1) - T;
    const auto mc = oracle1d::simulate_reflected_discards(T, n, start, 500, substream(kSuiteSeed, T, 800)());
    const bool ok = r.exact && *r.exact >= bound && std::abs(mc.mean - r.value) <= 3 * mc.std_error;
    out.pass = out.pass && ok;
    out.report.push_back({{"T", T}, {"exact", r.value}, {"bound", bound.convert_to<double>()},
                          {"mc_mean", mc.mean}, {"mc_se", mc.std_error}});
  }
  return out;
}

// 9. Filter stationarity: w_1000 over 5000 trials against the closed-form CDF.
Outcome filter_stationarity() {
  const auto density = cube_eigen_density(Box<double>::cube(1, 1.0));
  std::vector<double> snapshot;
  snapshot.reserve(5000);
  for (std::uint64_t trial = 0; trial < 5000; ++trial) {
    MetropolisFilter<double> f(density, substream(kSuiteSeed, trial, 900));
    Rng signs = substream(kSuiteSeed, trial, 901);
    for (int k = 0; k < 1000; ++k) f.step(vec1(0.3 * rademacher(signs)));
    snapshot.push_back(f.current()[0]);
  }
  const double d = testing::ks_statistic(snapshot, [](double x) { return testing::cos2_cdf(x, 1.0); });
  const double p = testing::ks_p_value(d, snapshot.size());
  return {p > 0.001, {{"ks_statistic", d}, {"p_value", p}}};
}

struct Criterion {
  int id;
  std::string name;
  double runtime_limit_s;
  std::function<Outcome()> run;
  bool rerun_for_determinism;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "cube headline: max-norm <= 32, mean discards <= 982 + 3 SE", 60, [] { return cube_headline(1); }, true},
      {2, "general Fisher bound on 50 mixed-norm step sets", 120, general_fisher_bound, true},
      {3, "rejection identity and Fisher bound, v in {0.05,0.1,0.2,0.4}", 30, rejection_identity, true},
      {4, "Fisher estimators agree with (pi^2/T^2) I and 4 lambda_1", 60, [] { return fisher_agreement(1); }, true},
      {5, "reflected walk is lex-smallest longest valid subsequence", 120, reflected_optimality, true},
      {6, "start-shift inequality l(eps,0) <= l(eps,s) + |s|", 60, start_shift, true},
      {7, "uniform start gives n/(2T+1) discards exactly", 5, stationary_identity, true},
      {8, "start-0 chain >= n/(2T+1) - T, Monte Carlo agrees", 30, lower_bound, true},
      {9, "filter keeps w_k ~ pi (KS at 0.001)", 60, filter_stationarity, true},
  };

  int failures = 0;
  std::vector<std::string> first_reports;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    std::string error;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.runtime_limit_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    first_reports.push_back(o.report.dump());
    std::printf("%s  C%-2d %s (%.2f s / %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                c.runtime_limit_s);
    if (!error.empty()) std::printf("      error: %s\n", error.c_str());
    if (!pass || std::getenv("DRIFTGUARD_VERBOSE")) {
      std::string details = o.report.dump();
      if (details.size() > 4000) details = details.substr(0, 4000) + "...";
      std::printf("      %s\n", details.c_str());
    }
    std::fflush(stdout);
  }

  // 10. Same seed, same bytes.
  {
    const auto t0 = std::chrono::steady_clock::now();
    int mismatches = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
      if (!criteria[i].rerun_for_determinism) continue;
      std::string again;
      try {
        again = criteria[i].run().report.dump();
      } catch (const std::exception& e) {
        again = e.what();
      }
      if (again != first_reports[i]) ++mismatches;
    }
    // Thread count must not change a single byte either.
    if (cube_headline(4).report.dump() != first_reports[0]) ++mismatches;
    if (fisher_agreement(3).report.dump() != first_reports[3]) ++mismatches;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = mismatches == 0;
    failures += pass ? 0 : 1;
    std::printf("%s  C10 determinism: %d byte mismatches over %zu reruns plus 2 thread-count variants (%.2f s)\n",
                pass ? "PASS" : "FAIL", mismatches, criteria.size(), secs);
  }

  std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
