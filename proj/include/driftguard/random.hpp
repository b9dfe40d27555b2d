#pragma once

#include <cstdint>
#include <random>

namespace driftguard {

using Rng = std::mt19937_64;

/// Deterministic child stream for (seed, index, tag). Streams for distinct
/// indices are independent of scheduling order, which is what makes
/// parallel trials reproducible.
inline Rng substream(std::uint64_t seed, std::uint64_t index, std::uint32_t tag = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    tag};
  return Rng(seq);
}

/// Uniform draw on the open interval (0, 1).
template <typename Scalar = double>
Scalar uniform_open01(Rng& rng) {
  std::uniform_real_distribution<Scalar> dist(Scalar(0), Scalar(1));
  Scalar u = dist(rng);
  while (u <= Scalar(0)) u = dist(rng);
  return u;
}

/// Fair sign, +1 or -1.
inline int rademacher(Rng& rng) { return (rng() >> 63) ? 1 : -1; }

}  // namespace driftguard
