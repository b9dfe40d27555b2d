#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace driftguard::oracle1d {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// A finite string of +-1 steps.
class SignSequence {
 public:
  SignSequence() = default;
  explicit SignSequence(std::vector<int> signs);

  /// Parses "+-+-" (also accepts "1"/"-1" separated by commas).
  static SignSequence parse(std::string_view text);
  /// Bit i of mask (LSB first) set means step i+1 is +1.
  static SignSequence from_bits(int n, std::uint64_t mask);

  int size() const { return static_cast<int>(signs_.size()); }
  bool empty() const { return signs_.empty(); }
  /// 1-based access, matching index subsequence conventions.
  int at(int position) const { return signs_[static_cast<std::size_t>(position - 1)]; }
  const std::vector<int>& signs() const { return signs_; }
  std::string to_string() const;

 private:
  std::vector<int> signs_;
};

/// Strictly increasing 1-based positions whose prefix sums, started at
/// `start`, stay within [-T, T].
struct ValidSubsequence {
  std::vector<int> indices;
  int start = 0;

  std::size_t size() const { return indices.size(); }
};

bool is_valid_subsequence(const SignSequence& eps, int T, int start, const std::vector<int>& indices);

/// Same-length lexicographic order: at the first differing slot, smaller index wins.
bool lex_less(const std::vector<int>& a, const std::vector<int>& b);

/// Greedy rule: accept k iff |S + eps_k| <= T.
ValidSubsequence reflected_walk(const SignSequence& eps, int T, int start);

inline constexpr int kMaxDpLength = 30;
inline constexpr int kMaxEnumerationLength = 14;

/// Longest valid subsequence length by DP over (position, partial sum).
int dp_longest_valid(const SignSequence& eps, int T, int start);

struct EnumerationResult {
  int longest = 0;
  std::vector<int> lex_smallest_longest;
  std::int64_t longest_count = 0;  // how many subsets attain the maximum
};

/// Exhaustive 2^n subset enumeration (n <= 14).
EnumerationResult enumerate_longest_valid(const SignSequence& eps, int T, int start);

/// Reflected-walk output has maximal length and is the lex-smallest maximiser.
bool verify_lex_optimality(const SignSequence& eps, int T, int start);

/// l(eps, 0) <= l(eps, s) + |s|.
bool verify_start_shift(const SignSequence& eps, int T, int s);

/// Distribution of the starting point over {-T, ..., T}, stored as integer
/// weights over a common denominator (their sum).
class StartDistribution {
 public:
  static StartDistribution uniform(int T);
  static StartDistribution point(int T, int s);
  static StartDistribution from_weights(int T, std::vector<std::uint64_t> weights);

  int T() const { return T_; }
  const std::vector<std::uint64_t>& weights() const { return weights_; }
  std::uint64_t total() const;
  std::string describe() const;

 private:
  StartDistribution(int T, std::vector<std::uint64_t> weights);
  int T_ = 0;
  std::vector<std::uint64_t> weights_;
};

/// Largest T for which the chain is evolved in exact arithmetic (2T + 1 <= 65).
inline constexpr int kMaxExactChainT = 32;

struct ChainExpectation {
  double value = 0.0;
  std::optional<Rational> exact;  // present when T <= kMaxExactChainT
};

/// Expected discards of the reflected walk over n steps: sum over k < n of
/// (P(S_k = T) + P(S_k = -T)) / 2, evolving the law of S_k exactly.
ChainExpectation exact_chain_expectation(int T, std::int64_t n, const StartDistribution& start);

/// Checks that the uniform law on {-T..T} is fixed by the reflected-walk
/// kernel, in exact rational arithmetic.
bool uniform_is_stationary(int T);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
};

/// Monte Carlo discards of the reflected walk with fair random signs.
MonteCarloEstimate simulate_reflected_discards(int T, std::int64_t n, const StartDistribution& start,
                                               std::int64_t trials, std::uint64_t seed);

}  // namespace driftguard::oracle1d
