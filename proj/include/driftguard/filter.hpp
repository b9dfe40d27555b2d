#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <sstream>
#include <vector>

#include "driftguard/density.hpp"
#include "driftguard/errors.hpp"
#include "driftguard/quadrature.hpp"
#include "driftguard/random.hpp"

namespace driftguard {

template <typename Scalar>
struct StepOutcome {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  bool accepted = false;
  Scalar acceptance_probability = Scalar(0);
  Vector proposed;
  Vector resulting_sum;  // accepted partial sum after this step
};

template <typename Scalar>
struct Trajectory {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  std::vector<StepOutcome<Scalar>> outcomes;
  std::vector<Vector> accepted_sums;

  std::int64_t discards() const {
    std::int64_t n = 0;
    for (const auto& o : outcomes) n += o.accepted ? 0 : 1;
    return n;
  }
};

/// Relative slack on the 2K containment assertion. The running sum is
/// current - origin, which can pick up rounding of order eps * T.
inline constexpr double kContainmentTolerance = 1e-9;

/// Online Metropolis discarding controller. Keeps w_k ~ pi by accepting the
/// proposal w + step with probability min(pi(w + step) / pi(w), 1); the
/// accepted partial sum w_k - w_0 then stays in 2K.
template <typename Scalar>
class MetropolisFilter {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using DensityPtr = std::shared_ptr<const Density<Scalar>>;

  MetropolisFilter(DensityPtr density, std::uint64_t rng_seed)
      : MetropolisFilter(std::move(density), Rng(rng_seed)) {}

  MetropolisFilter(DensityPtr density, Rng rng) : density_(std::move(density)), rng_(std::move(rng)) {
    if (!density_) throw PreconditionError("MetropolisFilter: null density");
    reset_origin(density_->sample(rng_));
  }

  /// Starts from a given interior point instead of a draw from the density.
  /// The stationarity guarantee then only holds asymptotically.
  MetropolisFilter(DensityPtr density, Vector origin, Rng rng)
      : density_(std::move(density)), rng_(std::move(rng)) {
    if (!density_) throw PreconditionError("MetropolisFilter: null density");
    if (origin.size() != density_->dim()) throw PreconditionError("MetropolisFilter: origin dimension mismatch");
    reset_origin(std::move(origin));
  }

  template <typename Derived>
  StepOutcome<Scalar> step(const Eigen::MatrixBase<Derived>& signed_step) {
    if (signed_step.size() != current_.size())
      throw PreconditionError("MetropolisFilter::step: dimension mismatch");
    if (!signed_step.allFinite())
      throw PreconditionError("MetropolisFilter::step: non-finite step");

    StepOutcome<Scalar> out;
    out.proposed = current_ + signed_step;
    const Scalar log_proposed = density_->log_density(out.proposed);
    const Scalar log_ratio = log_proposed - log_current_;
    out.acceptance_probability =
        std::isfinite(static_cast<double>(log_proposed)) ? std::exp(std::min(Scalar(0), log_ratio)) : Scalar(0);

    // One coin per step regardless of branch keeps streams aligned.
    const Scalar coin = std::uniform_real_distribution<Scalar>(Scalar(0), Scalar(1))(rng_);
    out.accepted = coin < out.acceptance_probability;

    ++steps_seen_;
    if (out.accepted) {
      current_ = out.proposed;
      log_current_ = log_proposed;
    } else {
      ++steps_discarded_;
    }
    out.resulting_sum = current_ - origin_;
    return out;
  }

  const Density<Scalar>& density() const { return *density_; }
  const Vector& origin() const { return origin_; }
  const Vector& current() const { return current_; }
  Vector accepted_sum() const { return current_ - origin_; }
  std::int64_t steps_seen() const { return steps_seen_; }
  std::int64_t steps_discarded() const { return steps_discarded_; }

 private:
  void reset_origin(Vector origin) {
    origin_ = std::move(origin);
    log_current_ = density_->log_density(origin_);
    if (!std::isfinite(static_cast<double>(log_current_)))
      throw PreconditionError("MetropolisFilter: origin outside the support");
    current_ = origin_;
  }

  DensityPtr density_;
  Rng rng_;
  Vector origin_;
  Vector current_;
  Scalar log_current_ = Scalar(0);
  std::int64_t steps_seen_ = 0;
  std::int64_t steps_discarded_ = 0;
};

/// Throws ContainmentViolation unless sum lies in 2K (up to rounding slack).
template <typename Scalar, typename Derived>
void assert_in_twice_body(const Box<Scalar>& body, const Eigen::MatrixBase<Derived>& sum, std::size_t step_index) {
  if (!body.contains_scaled(sum, Scalar(2), Scalar(kContainmentTolerance))) {
    std::ostringstream msg;
    msg << "accepted partial sum left 2K after step " << step_index << ": [" << sum.transpose() << "]";
    throw ContainmentViolation(msg.str());
  }
}

/// Feeds already-signed steps through a fresh filter, asserting 2K
/// containment after every step.
template <typename Scalar>
Trajectory<Scalar> filter_run(std::shared_ptr<const Density<Scalar>> density,
                              const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& signed_steps,
                              std::uint64_t rng_seed) {
  for (const auto& s : signed_steps) {
    if (s.size() != density->dim()) throw PreconditionError("filter_run: step dimension mismatch");
    if (!s.allFinite()) throw PreconditionError("filter_run: non-finite step");
  }
  MetropolisFilter<Scalar> filter(density, rng_seed);
  Trajectory<Scalar> traj;
  traj.outcomes.reserve(signed_steps.size());
  traj.accepted_sums.reserve(signed_steps.size());
  for (std::size_t k = 0; k < signed_steps.size(); ++k) {
    auto outcome = filter.step(signed_steps[k]);
    assert_in_twice_body(density->support(), outcome.resulting_sum, k);
    traj.accepted_sums.push_back(outcome.resulting_sum);
    traj.outcomes.push_back(std::move(outcome));
  }
  return traj;
}

struct RejectionEstimate {
  double frequency = 0.0;
  double std_error = 0.0;  // from independent per-chain means
  std::int64_t steps = 0;
};

/// Empirical rejection frequency of steps +-v with fair signs, spread over
/// `chains` independent filters each started from a fresh draw of pi.
/// One long chain would not do: with a fixed |v| it only ever visits the
/// lattice w_0 + vZ, whose stationary law is not pi. Started at w_0 ~ pi,
/// every step of every chain is marginally stationary.
template <typename Scalar>
RejectionEstimate estimate_rejection_rate(std::shared_ptr<const Density<Scalar>> density,
                                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v, std::int64_t steps,
                                          std::uint64_t rng_seed, std::int64_t chains = 1000) {
  if (chains < 2 || steps < chains || steps % chains != 0)
    throw PreconditionError("estimate_rejection_rate: steps must be a positive multiple of chains >= 2");
  const std::int64_t per_chain = steps / chains;
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t b = 0; b < chains; ++b) {
    const auto index = static_cast<std::uint64_t>(b);
    MetropolisFilter<Scalar> filter(density, substream(rng_seed, index, 0x434f494eu));
    Rng signs = substream(rng_seed, index, 0x5349474eu);
    for (std::int64_t k = 0; k < per_chain; ++k) filter.step(Scalar(rademacher(signs)) * v);
    const double mean = static_cast<double>(filter.steps_discarded()) / static_cast<double>(per_chain);
    sum += mean;
    sumsq += mean * mean;
  }
  const double m = static_cast<double>(chains);
  RejectionEstimate out;
  out.steps = steps;
  out.frequency = sum / m;
  out.std_error = std::sqrt(std::max(0.0, (sumsq - m * out.frequency * out.frequency) / (m - 1.0)) / m);
  return out;
}

/// Expected rejection probability E[1 - a(X, X + v)] = 1/2 int |pi(x+v) - pi(x)| dx
/// for a one-dimensional density. The integrand is only piecewise smooth, so
/// [-T - |v|, T + |v|] is split at the support edges of both terms and at the
/// sign changes of pi(x+v) - pi(x) (located on a `grid`-point scan and
/// refined by bisection), then each piece gets its own Gauss-Legendre rule.
template <typename Scalar>
Scalar rejection_rate_exact_1d(const Density<Scalar>& density, Scalar v, int grid) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (density.dim() != 1) throw PreconditionError("rejection_rate_exact_1d: density must be one-dimensional");
  if (grid < 256) throw PreconditionError("rejection_rate_exact_1d: grid must be >= 256");
  if (!std::isfinite(static_cast<double>(v))) throw PreconditionError("rejection_rate_exact_1d: non-finite v");
  if (v == Scalar(0)) return Scalar(0);

  const Scalar T = density.support().half_width(0);
  auto pdf = [&](Scalar x) {
    Vector p(1);
    p[0] = x;
    return density.value(p);
  };
  auto diff = [&](Scalar x) { return pdf(x + v) - pdf(x); };

  const Scalar lo = -T - std::abs(v);
  const Scalar hi = T + std::abs(v);
  std::vector<Scalar> cuts{lo, hi, -T, T, -T - v, T - v};

  const Scalar h = (hi - lo) / Scalar(grid);
  for (int i = 0; i < grid; ++i) {
    Scalar a = lo + h * Scalar(i);
    Scalar b = a + h;
    Scalar fa = diff(a), fb = diff(b);
    if (fa == Scalar(0) || fb == Scalar(0) || (fa < Scalar(0)) == (fb < Scalar(0))) continue;
    for (int it = 0; it < 200 && b - a > std::numeric_limits<Scalar>::epsilon() * T; ++it) {
      const Scalar m = Scalar(0.5) * (a + b);
      const Scalar fm = diff(m);
      if ((fm < Scalar(0)) == (fa < Scalar(0))) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    cuts.push_back(Scalar(0.5) * (a + b));
  }
  std::sort(cuts.begin(), cuts.end());

  const GaussLegendre<Scalar> rule(64);
  Scalar total(0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Scalar a = std::max(cuts[i], lo);
    const Scalar b = std::min(cuts[i + 1], hi);
    if (b > a) total += rule.integrate([&](Scalar x) { return std::abs(diff(x)); }, a, b);
  }
  return std::clamp(Scalar(0.5) * total, Scalar(0), Scalar(1));
}

}  // namespace driftguard
