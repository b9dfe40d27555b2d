#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "driftguard/errors.hpp"

namespace driftguard {

/// Axis-aligned centrally symmetric box prod_i [-T_i, T_i]. The cube
/// [-T, T]^d is the case where all half-widths coincide.
template <typename Scalar>
class Box {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit Box(Vector half_widths) : half_widths_(std::move(half_widths)) {
    if (half_widths_.size() < 1) throw PreconditionError("Box: dimension must be >= 1");
    for (Eigen::Index i = 0; i < half_widths_.size(); ++i) {
      if (!(half_widths_[i] > Scalar(0)) || !std::isfinite(static_cast<double>(half_widths_[i])))
        throw PreconditionError("Box: half-widths must be finite and strictly positive");
    }
  }

  static Box cube(Eigen::Index dim, Scalar half_width) {
    if (dim < 1) throw PreconditionError("Box: dimension must be >= 1");
    return Box(Vector::Constant(dim, half_width));
  }

  Eigen::Index dim() const { return half_widths_.size(); }
  const Vector& half_widths() const { return half_widths_; }
  Scalar half_width(Eigen::Index i) const { return half_widths_[i]; }

  bool is_cube() const { return (half_widths_.array() == half_widths_[0]).all(); }

  /// Strict interior membership.
  template <typename Derived>
  bool contains_interior(const Eigen::MatrixBase<Derived>& x) const {
    return x.size() == dim() && (x.array().abs() < half_widths_.array()).all();
  }

  /// Membership in scale*K, each coordinate allowed to overshoot by tol*T_i.
  template <typename Derived>
  bool contains_scaled(const Eigen::MatrixBase<Derived>& x, Scalar scale, Scalar tol = Scalar(0)) const {
    return x.size() == dim() &&
           (x.array().abs() <= half_widths_.array() * (scale + tol)).all();
  }

 private:
  Vector half_widths_;
};

}  // namespace driftguard
