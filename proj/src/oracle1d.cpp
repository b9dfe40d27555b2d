#include "driftguard/oracle1d.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "driftguard/errors.hpp"
#include "driftguard/random.hpp"

namespace driftguard::oracle1d {

namespace {

void check_range(int T, int start, const char* who) {
  if (T < 0) throw PreconditionError(std::string(who) + ": T must be nonnegative");
  if (start < -T || start > T)
    throw PreconditionError(std::string(who) + ": start " + std::to_string(start) + " outside [-T, T]");
}

void check_length(const SignSequence& eps, int limit, const char* who) {
  if (eps.size() > limit)
    throw PreconditionError(std::string(who) + ": sequence length " + std::to_string(eps.size()) +
                            " exceeds limit " + std::to_string(limit));
}

// One step of the reflected-walk kernel on counts indexed by j + T. Counts
// are unnormalised: each step doubles the total, one unit per sign.
template <typename Number>
std::vector<Number> reflect_step(const std::vector<Number>& c, int T) {
  const int width = 2 * T + 1;
  std::vector<Number> next(static_cast<std::size_t>(width), Number(0));
  for (int i = 0; i < width; ++i) {
    const auto& mass = c[static_cast<std::size_t>(i)];
    next[static_cast<std::size_t>(i + 1 < width ? i + 1 : i)] += mass;
    next[static_cast<std::size_t>(i - 1 >= 0 ? i - 1 : i)] += mass;
  }
  return next;
}

}  // namespace

SignSequence::SignSequence(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_)
    if (s != 1 && s != -1) throw PreconditionError("SignSequence: entries must be +1 or -1");
}

SignSequence SignSequence::parse(std::string_view text) {
  std::vector<int> signs;
  if (text.find(',') != std::string_view::npos) {
    std::string token;
    std::istringstream in{std::string(text)};
    while (std::getline(in, token, ',')) {
      if (token == "1" || token == "+1" || token == "+")
        signs.push_back(1);
      else if (token == "-1" || token == "-")
        signs.push_back(-1);
      else
        throw PreconditionError("SignSequence::parse: bad token '" + token + "'");
    }
    return SignSequence(std::move(signs));
  }
  for (char ch : text) {
    if (ch == '+')
      signs.push_back(1);
    else if (ch == '-')
      signs.push_back(-1);
    else
      throw PreconditionError(std::string("SignSequence::parse: bad character '") + ch + "'");
  }
  return SignSequence(std::move(signs));
}

SignSequence SignSequence::from_bits(int n, std::uint64_t mask) {
  if (n < 0 || n > 64) throw PreconditionError("SignSequence::from_bits: n must be in [0, 64]");
  std::vector<int> signs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) signs[static_cast<std::size_t>(i)] = ((mask >> i) & 1u) ? 1 : -1;
  return SignSequence(std::move(signs));
}

std::string SignSequence::to_string() const {
  std::string out;
  out.reserve(signs_.size());
  for (int s : signs_) out.push_back(s > 0 ? '+' : '-');
  return out;
}

bool is_valid_subsequence(const SignSequence& eps, int T, int start, const std::vector<int>& indices) {
  if (start < -T || start > T) return false;
  int sum = start;
  int prev = 0;
  for (int i : indices) {
    if (i <= prev || i > eps.size()) return false;
    sum += eps.at(i);
    if (std::abs(sum) > T) return false;
    prev = i;
  }
  return true;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw PreconditionError("lex_less: sequences must have equal length");
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) return a[k] < b[k];
  return false;
}

ValidSubsequence reflected_walk(const SignSequence& eps, int T, int start) {
  check_range(T, start, "reflected_walk");
  ValidSubsequence out{{}, start};
  int sum = start;
  for (int k = 1; k <= eps.size(); ++k) {
    if (std::abs(sum + eps.at(k)) <= T) {
      out.indices.push_back(k);
      sum += eps.at(k);
    }
  }
  return out;
}

int dp_longest_valid(const SignSequence& eps, int T, int start) {
  check_range(T, start, "dp_longest_valid");
  check_length(eps, kMaxDpLength, "dp_longest_valid");
  const int width = 2 * T + 1;
  // best[j] = longest prefix selection ending at partial sum j - T, -1 if unreachable.
  std::vector<int> best(static_cast<std::size_t>(width), -1);
  best[static_cast<std::size_t>(start + T)] = 0;
  for (int k = 1; k <= eps.size(); ++k) {
    std::vector<int> next = best;
    for (int j = 0; j < width; ++j) {
      if (best[static_cast<std::size_t>(j)] < 0) continue;
      const int to = j + eps.at(k);
      if (to < 0 || to >= width) continue;
      next[static_cast<std::size_t>(to)] =
          std::max(next[static_cast<std::size_t>(to)], best[static_cast<std::size_t>(j)] + 1);
    }
    best = std::move(next);
  }
  return *std::max_element(best.begin(), best.end());
}

EnumerationResult enumerate_longest_valid(const SignSequence& eps, int T, int start) {
  check_range(T, start, "enumerate_longest_valid");
  check_length(eps, kMaxEnumerationLength, "enumerate_longest_valid");
  const int n = eps.size();
  std::uint32_t plus = 0;
  for (int i = 0; i < n; ++i)
    if (eps.at(i + 1) > 0) plus |= 1u << i;

  int longest = -1;
  std::uint32_t best_mask = 0;
  std::int64_t count = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int sum = start;
    bool ok = true;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
      const std::uint32_t bit = rest & (~rest + 1);
      sum += (plus & bit) ? 1 : -1;
      if (sum > T || sum < -T) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const int len = std::popcount(mask);
    if (len > longest) {
      longest = len;
      best_mask = mask;
      count = 1;
    } else if (len == longest) {
      ++count;
      // Equal popcounts: the mask owning the lowest differing bit has the
      // smaller index at the first position where the sequences differ.
      const std::uint32_t diff = mask ^ best_mask;
      if (mask & diff & (~diff + 1)) best_mask = mask;
    }
  }

  EnumerationResult out;
  out.longest = longest;
  out.longest_count = count;
  for (int i = 0; i < n; ++i)
    if (best_mask & (1u << i)) out.lex_smallest_longest.push_back(i + 1);
  return out;
}

bool verify_lex_optimality(const SignSequence& eps, int T, int start) {
  check_length(eps, kMaxEnumerationLength, "verify_lex_optimality");
  const ValidSubsequence walk = reflected_walk(eps, T, start);
  if (!is_valid_subsequence(eps, T, start, walk.indices)) return false;
  const EnumerationResult all = enumerate_longest_valid(eps, T, start);
  return static_cast<int>(walk.size()) == all.longest && walk.indices == all.lex_smallest_longest;
}

bool verify_start_shift(const SignSequence& eps, int T, int s) {
  check_range(T, s, "verify_start_shift");
  check_length(eps, kMaxEnumerationLength, "verify_start_shift");
  return dp_longest_valid(eps, T, 0) <= dp_longest_valid(eps, T, s) + std::abs(s);
}

StartDistribution::StartDistribution(int T, std::vector<std::uint64_t> weights)
    : T_(T), weights_(std::move(weights)) {}

StartDistribution StartDistribution::uniform(int T) {
  if (T < 0) throw PreconditionError("StartDistribution: T must be nonnegative");
  return StartDistribution(T, std::vector<std::uint64_t>(static_cast<std::size_t>(2 * T + 1), 1));
}

StartDistribution StartDistribution::point(int T, int s) {
  check_range(T, s, "StartDistribution::point");
  std::vector<std::uint64_t> w(static_cast<std::size_t>(2 * T + 1), 0);
  w[static_cast<std::size_t>(s + T)] = 1;
  return StartDistribution(T, std::move(w));
}

StartDistribution StartDistribution::from_weights(int T, std::vector<std::uint64_t> weights) {
  if (T < 0) throw PreconditionError("StartDistribution: T must be nonnegative");
  if (weights.size() != static_cast<std::size_t>(2 * T + 1))
    throw PreconditionError("StartDistribution: need 2T + 1 weights");
  StartDistribution out(T, std::move(weights));
  if (out.total() == 0) throw PreconditionError("StartDistribution: weights sum to zero");
  return out;
}

std::uint64_t StartDistribution::total() const {
  std::uint64_t t = 0;
  for (auto w : weights_) t += w;
  return t;
}

std::string StartDistribution::describe() const {
  const auto nonzero = std::count_if(weights_.begin(), weights_.end(), [](auto w) { return w != 0; });
  if (nonzero == 1) {
    const auto it = std::find_if(weights_.begin(), weights_.end(), [](auto w) { return w != 0; });
    return std::to_string(static_cast<int>(it - weights_.begin()) - T_);
  }
  if (std::all_of(weights_.begin(), weights_.end(), [&](auto w) { return w == weights_.front(); }))
    return "uniform";
  return "weighted";
}

// Exact horizon cap: numerators grow by one bit per step.
static constexpr std::int64_t kMaxExactChainSteps = 200000;

ChainExpectation exact_chain_expectation(int T, std::int64_t n, const StartDistribution& start) {
  if (T < 0 || n < 0) throw PreconditionError("exact_chain_expectation: T and n must be nonnegative");
  if (start.T() != T) throw PreconditionError("exact_chain_expectation: start distribution built for another T");
  const auto top = static_cast<std::size_t>(2 * T);

  ChainExpectation out;
  if (T <= kMaxExactChainT && n <= kMaxExactChainSteps) {
    // Law of S_k is c_k / (D 2^k). Horner accumulation of
    // sum_k (c_k(T) + c_k(-T)) 2^(n-1-k) gives the total over D 2^n.
    std::vector<BigInt> c(start.weights().begin(), start.weights().end());
    BigInt acc = 0;
    for (std::int64_t k = 0; k < n; ++k) {
      acc <<= 1;
      acc += c[0];
      acc += c[top];
      c = reflect_step(c, T);
    }
    BigInt den = BigInt(start.total());
    den <<= static_cast<unsigned>(n);
    out.exact = Rational(acc, den);
    out.value = out.exact->convert_to<double>();
    return out;
  }

  std::vector<double> p(start.weights().size());
  const double total = static_cast<double>(start.total());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = static_cast<double>(start.weights()[j]) / total;
  double acc = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    acc += 0.5 * (p[0] + p[top]);
    p = reflect_step(p, T);
    for (double& x : p) x *= 0.5;
  }
  out.value = acc;
  return out;
}

bool uniform_is_stationary(int T) {
  if (T < 0) throw PreconditionError("uniform_is_stationary: T must be nonnegative");
  const auto width = static_cast<std::size_t>(2 * T + 1);
  const std::vector<Rational> uniform(width, Rational(1, static_cast<long>(width)));
  std::vector<Rational> next = reflect_step(uniform, T);
  for (auto& x : next) x /= 2;
  return next == uniform;
}

MonteCarloEstimate simulate_reflected_discards(int T, std::int64_t n, const StartDistribution& start,
                                               std::int64_t trials, std::uint64_t seed) {
  if (T < 0 || n < 0) throw PreconditionError("simulate_reflected_discards: T and n must be nonnegative");
  if (trials < 2) throw PreconditionError("simulate_reflected_discards: need at least 2 trials");
  if (start.T() != T) throw PreconditionError("simulate_reflected_discards: start distribution built for another T");

  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(t), 0x52574c4bu);
    std::uniform_int_distribution<std::uint64_t> pick(0, start.total() - 1);
    std::uint64_t r = pick(rng);
    int s = -T;
    for (auto w : start.weights()) {
      if (r < w) break;
      r -= w;
      ++s;
    }
    std::int64_t discards = 0;
    for (std::int64_t k = 0; k < n; ++k) {
      const int next = s + rademacher(rng);
      if (next > T || next < -T)
        ++discards;
      else
        s = next;
    }
    const auto x = static_cast<double>(discards);
    sum += x;
    sumsq += x * x;
  }
  const auto m = static_cast<double>(trials);
  MonteCarloEstimate out;
  out.trials = trials;
  out.mean = sum / m;
  const double var = std::max(0.0, (sumsq - m * out.mean * out.mean) / (m - 1.0));
  out.std_error = std::sqrt(var / m);
  return out;
}

}  // namespace driftguard::oracle1d
