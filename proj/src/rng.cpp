#include <mlcp/rng.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace mlcp {

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return splitmix64_mix(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t CounterRng::below(std::uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("CounterRng::below: empty range");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % n + 1) % n;
    for (;;) {
        const std::uint64_t x = next_u64();
        if (x <= limit)
            return x % n;
    }
}

double CounterRng::normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::uint64_t> partial_shuffle(std::uint64_t n, std::uint64_t m, CounterRng &rng) {
    if (m > n)
        throw std::invalid_argument("partial_shuffle: m exceeds n");
    std::vector<std::uint64_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::uint64_t{0});
    for (std::uint64_t i = 0; i < m; ++i)
        std::swap(idx[i], idx[i + rng.below(n - i)]);
    return idx;
}

} // namespace mlcp
