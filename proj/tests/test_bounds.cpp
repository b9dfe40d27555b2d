#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "driftguard/bounds.hpp"
#include "driftguard/harness.hpp"

using namespace driftguard;
using std::numbers::pi;

namespace {
constexpr std::uint64_t kSuiteSeed = 20261016;
}

TEST_CASE("general Fisher bound") {
  const auto f = fisher_closed_form_cube(Box<double>::cube(2, 1.0));
  CHECK(upper_bound_general(f, std::vector<Eigen::VectorXd>{}).value == 0.0);

  std::vector<Eigen::VectorXd> unit(100, Eigen::VectorXd::Unit(2, 1));
  const auto r = upper_bound_general(f, unit);
  CHECK(r.kind == BoundKind::general_fisher);
  CHECK(r.value == doctest::Approx(50 * pi));

  const auto f3 = fisher_closed_form_cube(Box<double>::cube(3, 16.0));
  std::vector<Eigen::VectorXd> steps(10000, Eigen::Vector3d(0.6, 0.0, 0.8));
  CHECK(upper_bound_general(f3, steps).value == doctest::Approx(pi / 32 * 1e4).epsilon(1e-12));
  CHECK(upper_bound_general(f3, steps).value == doctest::Approx(981.7).epsilon(1e-4));

  std::vector<Eigen::VectorXd> wrong{Eigen::VectorXd::Ones(2)};
  CHECK_THROWS_AS(upper_bound_general(f3, wrong), PreconditionError);
}

TEST_CASE("cube bound") {
  const std::vector<double> units(10000, 1.0);
  const auto r = upper_bound_cube(16.0, units);
  CHECK(r.value == doctest::Approx(981.75).epsilon(1e-5));
  CHECK(r.value < 0.1 * 10000);
  CHECK(upper_bound_cube(3.0, std::vector<double>(5, 0.0)).value == 0.0);
  const std::vector<double> norms{1, 2, 3};
  CHECK(upper_bound_cube(1.0, norms).value == doctest::Approx(3 * pi));
  CHECK_THROWS_AS(upper_bound_cube(0.0, norms), PreconditionError);
  CHECK_THROWS_AS(upper_bound_cube(-1.0, norms), PreconditionError);
}

TEST_CASE("cube bound equals the general bound with the closed-form Fisher matrix") {
  std::mt19937_64 gen(kSuiteSeed);
  for (int set = 0; set < 100; ++set) {
    const int d = 1 + static_cast<int>(gen() % 5);
    const double T = std::uniform_real_distribution<double>(0.1, 40.0)(gen);
    const int n = static_cast<int>(gen() % 50);
    std::vector<Eigen::VectorXd> steps;
    std::vector<double> norms;
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd v(d);
      for (int i = 0; i < d; ++i) v[i] = normal(gen);
      norms.push_back(v.norm());
      steps.push_back(std::move(v));
    }
    const double general = upper_bound_general(fisher_closed_form_cube(Box<double>::cube(d, T)), steps).value;
    const double cube = upper_bound_cube(T, norms).value;
    CHECK(std::abs(general - cube) <= 1e-12 * std::max(1.0, cube));
  }
}

TEST_CASE("isotropic bound") {
  CHECK(isotropic_bound(Box<double>::cube(1, pi / 2), 100).value == doctest::Approx(100.0).epsilon(1e-14));
  CHECK(isotropic_bound(Box<double>::cube(3, 16.0), 10000).value ==
        doctest::Approx(pi * std::sqrt(3.0) / 32 * 1e4).epsilon(1e-14));
  CHECK(isotropic_bound(Box<double>::cube(3, 16.0), 10000).value == doctest::Approx(1700.4).epsilon(1e-4));
  CHECK(isotropic_bound(Box<double>::cube(2, 1.0), 0).value == 0.0);
  CHECK_THROWS_AS(isotropic_bound(Box<double>::cube(2, 1.0), -1), PreconditionError);
}

TEST_CASE("one-dimensional lower bound") {
  CHECK(lower_bound_1d(2, 100).value == 18.0);
  CHECK(lower_bound_1d(0, 0).value == 0.0);
  CHECK(lower_bound_1d(3, 10000).value == doctest::Approx(1e4 / 7 - 3));
  CHECK(lower_bound_1d(3, 10000).value == doctest::Approx(1425.57).epsilon(1e-5));
  CHECK(lower_bound_1d(5, 10).value < 0.0);  // vacuous, reported raw
  CHECK(lower_bound_1d(0, 7).value == 7.0);
  CHECK_THROWS_AS(lower_bound_1d(-1, 10), PreconditionError);
  CHECK_THROWS_AS(lower_bound_1d(1, -10), PreconditionError);
}

TEST_CASE("bound kinds round-trip through their names") {
  for (auto kind : {BoundKind::general_fisher, BoundKind::cube_l2, BoundKind::isotropic, BoundKind::lower_1d})
    CHECK(bound_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(bound_kind_from_string("upper"), PreconditionError);
}

TEST_CASE("monotonicity in T on the grid 1..32") {
  const std::vector<double> units(10000, 1.0);
  for (int T = 1; T < 32; ++T) {
    CHECK(upper_bound_cube(T + 1, units).value <= upper_bound_cube(T, units).value);
    CHECK(isotropic_bound(Box<double>::cube(2, T + 1), 10000).value <=
          isotropic_bound(Box<double>::cube(2, T), 10000).value);
    CHECK(lower_bound_1d(T + 1, 10000).value <= lower_bound_1d(T, 10000).value);
  }
}

TEST_CASE("empirical 1D discards sit between the lower and upper bounds") {
  for (double T : {4.0, 8.0, 16.0}) {
    ExperimentConfig cfg;
    cfg.body = Box<double>::cube(1, T);
    cfg.generator = generator_from_name("pm1", 1);
    cfg.n_steps = 10000;
    cfg.n_trials = 100;
    cfg.seed = kSuiteSeed;
    const RunStats stats = run_experiment(cfg);
    const double lower = lower_bound_1d(static_cast<std::int64_t>(T), cfg.n_steps).value;
    const double upper = upper_bound_cube(T, std::vector<double>(10000, 1.0)).value;
    CHECK(lower <= stats.mean);
    CHECK(stats.mean <= upper + 3 * stats.std_error);
  }
}
