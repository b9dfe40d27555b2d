#pragma once

// Oracles shared by the unit and acceptance suites. Deliberately independent
// of the library: closed forms are restated here and integrals use plain
// midpoint sums.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace driftguard::testing {

/// The one-dimensional cube eigen-density T^-1 cos^2(pi x / 2T), restated.
inline double cos2_pdf(double x, double T) {
  if (std::abs(x) >= T) return 0.0;
  const double c = std::cos(std::numbers::pi * x / (2 * T));
  return c * c / T;
}

inline double cos2_cdf(double x, double T) {
  if (x <= -T) return 0.0;
  if (x >= T) return 1.0;
  return x / (2 * T) + 0.5 + std::sin(std::numbers::pi * x / T) / (2 * std::numbers::pi);
}

/// 1/2 int |p(x + v) - p(x)| dx by an m-point midpoint sum over the union of supports.
inline double half_l1_shift_midpoint(double T, double v, int m = 4000000) {
  const double lo = -T - std::abs(v), hi = T + std::abs(v);
  const double h = (hi - lo) / m;
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = lo + (i + 0.5) * h;
    acc += std::abs(cos2_pdf(x + v, T) - cos2_pdf(x, T));
  }
  return 0.5 * acc * h;
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic Kolmogorov tail probability with Stephens' small-sample correction.
inline double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace driftguard::testing
