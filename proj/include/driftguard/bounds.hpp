#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "driftguard/box.hpp"
#include "driftguard/density.hpp"
#include "driftguard/errors.hpp"
#include "driftguard/fisher.hpp"

namespace driftguard {

enum class BoundKind { general_fisher, cube_l2, isotropic, lower_1d };

inline const char* to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::general_fisher: return "general_fisher";
    case BoundKind::cube_l2: return "cube_l2";
    case BoundKind::isotropic: return "isotropic";
    case BoundKind::lower_1d: return "lower_1d";
  }
  return "unknown";
}

BoundKind bound_kind_from_string(const std::string& name);

/// A closed-form bound on the expected number of discarded steps.
/// lower_1d may be negative (vacuous) for short horizons and is reported as is.
struct BoundReport {
  BoundKind kind = BoundKind::general_fisher;
  double value = 0.0;
  std::string inputs_digest;

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// 1/2 sum_j sqrt(v_j^T I v_j).
template <typename Scalar>
BoundReport upper_bound_general(const FisherMatrix<Scalar>& fisher,
                                std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> steps) {
  Scalar sum(0);
  for (const auto& v : steps) sum += direction_information(fisher, v);
  std::ostringstream digest;
  digest << "n=" << steps.size() << " d=" << fisher.dim() << " fisher=" << to_string(fisher.estimator_kind);
  return {BoundKind::general_fisher, static_cast<double>(Scalar(0.5) * sum), digest.str()};
}

template <typename Scalar>
BoundReport upper_bound_general(const FisherMatrix<Scalar>& fisher,
                                const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& steps) {
  return upper_bound_general(fisher, std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(steps));
}

/// (pi / 2T) sum_j ||v_j||_2 for the cube [-T, T]^d.
inline BoundReport upper_bound_cube(double T, std::span<const double> step_l2_norms) {
  if (!(T > 0.0)) throw PreconditionError("upper_bound_cube: T must be positive");
  double total = 0.0;
  for (double norm : step_l2_norms) total += norm;
  std::ostringstream digest;
  digest << "n=" << step_l2_norms.size() << " T=" << T << " sum_l2=" << total;
  return {BoundKind::cube_l2, detail::kPi / (2.0 * T) * total, digest.str()};
}

/// sqrt(lambda_1(K)) * n for isotropic steps.
inline BoundReport isotropic_bound(const Box<double>& box, std::int64_t n) {
  if (n < 0) throw PreconditionError("isotropic_bound: n must be nonnegative");
  const double lambda1 = dirichlet_lambda1_box(box);
  std::ostringstream digest;
  digest << "n=" << n << " d=" << box.dim() << " lambda1=" << lambda1;
  return {BoundKind::isotropic, std::sqrt(lambda1) * static_cast<double>(n), digest.str()};
}

/// n / (2T + 1) - T: the minimum expected discards of any rule keeping a
/// +-1 walk in [-T, T]. Formed as a single rational before rounding.
inline BoundReport lower_bound_1d(std::int64_t T, std::int64_t n) {
  if (T < 0 || n < 0) throw PreconditionError("lower_bound_1d: T and n must be nonnegative");
  const std::int64_t den = 2 * T + 1;
  const std::int64_t num = n - T * den;
  std::ostringstream digest;
  digest << "n=" << n << " T=" << T << " exact=" << num << "/" << den;
  return {BoundKind::lower_1d, static_cast<double>(num) / static_cast<double>(den), digest.str()};
}

}  // namespace driftguard
