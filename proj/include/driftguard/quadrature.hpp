#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "driftguard/errors.hpp"
#include <vector>

#include "driftguard/box.hpp"

namespace driftguard {

/// n-point Gauss-Legendre rule on [-1, 1]. Nodes come from Newton iteration
/// on P_n started at the Chebyshev-type guesses; all nodes are strictly
/// inside (-1, 1).
template <typename Scalar>
struct GaussLegendre {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Vector nodes;
  Vector weights;

  explicit GaussLegendre(int n) : nodes(n), weights(n) {
    if (n < 1) throw PreconditionError("GaussLegendre: need at least one node");
    const Scalar pi(std::numbers::pi);
    for (int i = 0; i < (n + 1) / 2; ++i) {
      Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
      Scalar dp(0);
      for (int iter = 0; iter < 100; ++iter) {
        Scalar p0(1), p1 = x;
        for (int k = 2; k <= n; ++k) {
          const Scalar p2 = ((Scalar(2 * k - 1)) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
          p0 = p1;
          p1 = p2;
        }
        // p1 = P_n(x), p0 = P_{n-1}(x)
        dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
        const Scalar dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon()) break;
      }
      // Recompute derivative at the converged node for the weight.
      Scalar p0(1), p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((Scalar(2 * k - 1)) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
      const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }

  int size() const { return static_cast<int>(nodes.size()); }

  /// Integral of f over [a, b].
  template <typename F>
  Scalar integrate(F&& f, Scalar a, Scalar b) const {
    const Scalar half = Scalar(0.5) * (b - a);
    const Scalar mid = Scalar(0.5) * (a + b);
    Scalar acc(0);
    for (Eigen::Index i = 0; i < nodes.size(); ++i) acc += weights[i] * f(mid + half * nodes[i]);
    return half * acc;
  }
};

/// Tensor-product Gauss-Legendre over a box. f receives each node as a
/// d-vector together with its product weight (already scaled to the box).
template <typename Scalar, typename F>
void for_each_tensor_node(const Box<Scalar>& box, const GaussLegendre<Scalar>& rule, F&& f) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index d = box.dim();
  const int n = rule.size();
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Vector x(d);
  for (;;) {
    Scalar w(1);
    for (Eigen::Index k = 0; k < d; ++k) {
      const Scalar T = box.half_width(k);
      x[k] = T * rule.nodes[idx[k]];
      w *= T * rule.weights[idx[k]];
    }
    f(x, w);
    Eigen::Index k = 0;
    while (k < d && ++idx[k] == n) idx[k++] = 0;
    if (k == d) break;
  }
}

}  // namespace driftguard
