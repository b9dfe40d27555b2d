#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "driftguard/box.hpp"
#include "driftguard/random.hpp"

namespace driftguard {

/// A probability density supported in the interior of a box. Implementations
/// must return -infinity from log_density exactly off the open support, and
/// the sampler must only produce interior points.
template <typename Scalar>
class Density {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using ConstRef = Eigen::Ref<const Vector>;

  virtual ~Density() = default;

  virtual const Box<Scalar>& support() const = 0;
  virtual Scalar log_density(ConstRef x) const = 0;
  /// Score, the gradient of log_density. Only defined at interior points.
  virtual Vector log_gradient(ConstRef x) const = 0;
  virtual Vector sample(Rng& rng) const = 0;

  Eigen::Index dim() const { return support().dim(); }
  Scalar value(ConstRef x) const { return std::exp(log_density(x)); }
  bool in_support(ConstRef x) const { return support().contains_interior(x); }
};

namespace detail {

constexpr double kPi = std::numbers::pi;

template <typename Scalar>
Scalar cos2_cdf_1d(Scalar x, Scalar T) {
  using std::sin;
  const Scalar pi(kPi);
  if (x <= -T) return Scalar(0);
  if (x >= T) return Scalar(1);
  return x / (Scalar(2) * T) + Scalar(0.5) + sin(pi * x / T) / (Scalar(2) * pi);
}

}  // namespace detail

/// CDF of the one-dimensional density T^-1 cos^2(pi x / 2T) on (-T, T).
template <typename Scalar>
Scalar cube_eigen_cdf_1d(Scalar x, Scalar T) {
  return detail::cos2_cdf_1d(x, T);
}

/// Inverse of cube_eigen_cdf_1d by bisection, to bracket width 1e-12 * T.
template <typename Scalar>
Scalar cube_eigen_quantile_1d(Scalar u, Scalar T) {
  Scalar lo = -T;
  Scalar hi = T;
  const Scalar tol = Scalar(1e-12) * T;
  while (hi - lo > tol) {
    const Scalar mid = Scalar(0.5) * (lo + hi);
    if (detail::cos2_cdf_1d(mid, T) < u)
      lo = mid;
    else
      hi = mid;
  }
  return Scalar(0.5) * (lo + hi);
}

/// pi(x) = prod_i T_i^-1 cos^2(pi x_i / 2T_i), the square of the normalised
/// first Dirichlet eigenfunction of the box.
template <typename Scalar>
class CubeEigenDensity final : public Density<Scalar> {
 public:
  using typename Density<Scalar>::Vector;
  using typename Density<Scalar>::ConstRef;

  explicit CubeEigenDensity(Box<Scalar> box) : box_(std::move(box)) {}

  const Box<Scalar>& support() const override { return box_; }

  Scalar log_density(ConstRef x) const override {
    if (!box_.contains_interior(x)) return -std::numeric_limits<Scalar>::infinity();
    const Scalar pi(detail::kPi);
    Scalar acc(0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const Scalar T = box_.half_width(i);
      const Scalar c = std::cos(pi * x[i] / (Scalar(2) * T));
      if (!(c > Scalar(0))) return -std::numeric_limits<Scalar>::infinity();
      acc += Scalar(2) * std::log(c) - std::log(T);
    }
    return acc;
  }

  Vector log_gradient(ConstRef x) const override {
    const Scalar pi(detail::kPi);
    Vector g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const Scalar T = box_.half_width(i);
      g[i] = -(pi / T) * std::tan(pi * x[i] / (Scalar(2) * T));
    }
    return g;
  }

  Vector sample(Rng& rng) const override {
    Vector x(box_.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = cube_eigen_quantile_1d(uniform_open01<Scalar>(rng), box_.half_width(i));
    }
    return x;
  }

  /// Normalised eigenfunction psi = sqrt(pi), nonnegative on the box.
  Scalar eigenfunction(ConstRef x) const {
    if (!box_.contains_interior(x)) return Scalar(0);
    const Scalar pi(detail::kPi);
    Scalar acc(1);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const Scalar T = box_.half_width(i);
      acc *= std::cos(pi * x[i] / (Scalar(2) * T)) / std::sqrt(T);
    }
    return acc;
  }

 private:
  Box<Scalar> box_;
};

template <typename Scalar>
std::shared_ptr<const CubeEigenDensity<Scalar>> cube_eigen_density(const Box<Scalar>& box) {
  return std::make_shared<const CubeEigenDensity<Scalar>>(box);
}

/// First Dirichlet eigenvalue of the box, sum_i pi^2 / (4 T_i^2).
template <typename Scalar>
Scalar dirichlet_lambda1_box(const Box<Scalar>& box) {
  const Scalar pi(detail::kPi);
  return (pi * pi / (Scalar(4) * box.half_widths().array().square())).sum();
}

}  // namespace driftguard
