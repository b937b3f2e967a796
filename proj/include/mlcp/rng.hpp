#pragma once

#include <cstdint>
#include <vector>

namespace mlcp {

/// Counter-based SplitMix64 stream: the k-th draw (k = 0, 1, ...) is
/// mix64(seed + (k + 1) * 0x9E3779B97F4A7C15), where mix64 is the SplitMix64
/// finalizer. Every derived distribution below is defined in terms of these
/// 64-bit words so a seed reproduces the same data in any language.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

    std::uint64_t next_u64();
    /// (word >> 11) * 2^-53, in [0, 1).
    double uniform();
    /// Uniform integer in [0, n) by rejection of the biased top range.
    std::uint64_t below(std::uint64_t n);
    /// Box-Muller cosine branch with u1 = 1 - uniform(), u2 = uniform().
    double normal();

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

/// Indices 0..n-1 after the first `m` steps of a Fisher-Yates shuffle (step i
/// swaps i with i + below(n - i)); the first m entries are a uniform m-subset.
std::vector<std::uint64_t> partial_shuffle(std::uint64_t n, std::uint64_t m, CounterRng &rng);

} // namespace mlcp
