#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftguard/density.hpp"
#include "driftguard/errors.hpp"
#include "driftguard/parallel.hpp"
#include "driftguard/quadrature.hpp"
#include "driftguard/random.hpp"

namespace driftguard {

enum class FisherEstimator { closed_form, quadrature, monte_carlo };

inline const char* to_string(FisherEstimator kind) {
  switch (kind) {
    case FisherEstimator::closed_form: return "closed_form";
    case FisherEstimator::quadrature: return "quadrature";
    case FisherEstimator::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

/// Fisher information of the translate family x -> pi(x + theta) at
/// theta = 0, i.e. the second moment of the score grad log pi(X), X ~ pi.
template <typename Scalar>
struct FisherMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix entries;
  FisherEstimator estimator_kind = FisherEstimator::closed_form;
  std::optional<Matrix> std_error;  // monte_carlo only

  Eigen::Index dim() const { return entries.rows(); }
  Scalar trace() const { return entries.trace(); }

  bool is_symmetric(Scalar tol = Scalar(1e-12)) const {
    const Matrix asym = (entries - entries.transpose()).cwiseAbs();
    if (std_error) return (asym.array() <= Scalar(3) * (*std_error + std_error->transpose()).array() + tol).all();
    return asym.maxCoeff() <= tol;
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues() const {
    const Matrix sym = Scalar(0.5) * (entries + entries.transpose());
    return Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
  }

  bool is_psd(Scalar floor = Scalar(-1e-9)) const { return eigenvalues().minCoeff() >= floor; }

  /// Operator norm, the largest eigenvalue of the symmetrised matrix.
  Scalar operator_norm() const { return eigenvalues().maxCoeff(); }
};

/// sqrt(v^T I v): the score's standard deviation along v.
template <typename Scalar, typename Derived>
Scalar direction_information(const FisherMatrix<Scalar>& fisher, const Eigen::MatrixBase<Derived>& v) {
  if (v.size() != fisher.dim())
    throw PreconditionError("direction_information: dimension mismatch");
  const Scalar q = v.dot(fisher.entries * v);
  return std::sqrt(std::max(q, Scalar(0)));
}

/// Square root of the operator norm of a given density's Fisher matrix.
/// Upper-bounds the information capacity of the support; no search over
/// densities is performed.
template <typename Scalar>
Scalar information_capacity(const FisherMatrix<Scalar>& fisher) {
  return std::sqrt(std::max(fisher.operator_norm(), Scalar(0)));
}

/// Closed form for the cube eigen-density: (pi^2 / T^2) Identity.
template <typename Scalar>
FisherMatrix<Scalar> fisher_closed_form_cube(const Box<Scalar>& box) {
  if (!box.is_cube())
    throw PreconditionError("fisher_closed_form_cube: box is not a cube; use fisher_quadrature");
  const Scalar pi(detail::kPi);
  const Scalar T = box.half_width(0);
  FisherMatrix<Scalar> out;
  out.entries = (pi * pi / (T * T)) *
                FisherMatrix<Scalar>::Matrix::Identity(box.dim(), box.dim());
  out.estimator_kind = FisherEstimator::closed_form;
  return out;
}

inline constexpr int kMaxQuadratureDim = 3;
inline constexpr int kMinQuadratureNodes = 16;

/// Tensor Gauss-Legendre quadrature of (grad log pi)(grad log pi)^T pi over
/// the support box.
template <typename Scalar>
FisherMatrix<Scalar> fisher_quadrature(const Density<Scalar>& density, int grid_points_per_axis) {
  using Matrix = typename FisherMatrix<Scalar>::Matrix;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (density.dim() > kMaxQuadratureDim)
    throw PreconditionError("fisher_quadrature: dimension " + std::to_string(density.dim()) +
                            " exceeds tensor quadrature limit of 3");
  if (grid_points_per_axis < kMinQuadratureNodes)
    throw PreconditionError("fisher_quadrature: need at least 16 nodes per axis");

  const GaussLegendre<Scalar> rule(grid_points_per_axis);
  Matrix acc = Matrix::Zero(density.dim(), density.dim());
  for_each_tensor_node(density.support(), rule, [&](const Vector& x, Scalar w) {
    const Scalar logp = density.log_density(x);
    if (!std::isfinite(static_cast<double>(logp))) return;
    const Vector g = density.log_gradient(x);
    if (!g.allFinite())
      throw NumericalError("fisher_quadrature: non-finite score at an interior node");
    acc.noalias() += (w * std::exp(logp)) * g * g.transpose();
  });

  FisherMatrix<Scalar> out;
  out.entries = Scalar(0.5) * (acc + acc.transpose());
  out.estimator_kind = FisherEstimator::quadrature;
  return out;
}

inline constexpr std::int64_t kMinMonteCarloSamples = 1000;
inline constexpr std::int64_t kMonteCarloBatch = 1 << 16;

/// Sample mean of score outer products. Samples are drawn in fixed-size
/// batches with per-batch substreams, so the result is independent of the
/// thread count.
template <typename Scalar>
FisherMatrix<Scalar> fisher_monte_carlo(const Density<Scalar>& density, std::int64_t samples,
                                        std::uint64_t rng_seed, unsigned threads = 1) {
  using Matrix = typename FisherMatrix<Scalar>::Matrix;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (samples < kMinMonteCarloSamples)
    throw PreconditionError("fisher_monte_carlo: need at least 1000 samples");

  const Eigen::Index d = density.dim();
  const auto batches = static_cast<std::size_t>((samples + kMonteCarloBatch - 1) / kMonteCarloBatch);
  std::vector<Matrix> sums(batches, Matrix::Zero(d, d));
  std::vector<Matrix> squares(batches, Matrix::Zero(d, d));

  parallel_for(batches, threads, [&](std::size_t b) {
    Rng rng = substream(rng_seed, b, /*tag=*/0x46495348u);
    const std::int64_t begin = static_cast<std::int64_t>(b) * kMonteCarloBatch;
    const std::int64_t end = std::min(samples, begin + kMonteCarloBatch);
    for (std::int64_t s = begin; s < end; ++s) {
      const Vector x = density.sample(rng);
      const Vector g = density.log_gradient(x);
      const Matrix outer = g * g.transpose();
      sums[b] += outer;
      squares[b] += outer.cwiseAbs2();
    }
  });

  Matrix sum = Matrix::Zero(d, d);
  Matrix sq = Matrix::Zero(d, d);
  for (std::size_t b = 0; b < batches; ++b) {
    sum += sums[b];
    sq += squares[b];
  }
  const Scalar n = static_cast<Scalar>(samples);
  FisherMatrix<Scalar> out;
  out.entries = sum / n;
  const Matrix var = ((sq / n - out.entries.cwiseAbs2()) * (n / (n - Scalar(1)))).cwiseMax(Scalar(0));
  out.std_error = (var / n).cwiseSqrt();
  out.estimator_kind = FisherEstimator::monte_carlo;
  return out;
}

}  // namespace driftguard
