#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace fica {

// SplitMix64 finalizer. Used to derive independent stream seeds from
// (seed, index) pairs so Monte-Carlo work can be split across threads
// without the result depending on the schedule.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream + 0x632BE59BD9B4E019ULL));
}

/// Seeded generator with platform-independent derived draws.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The std::*_distribution adaptors are not, so uniform,
/// bounded-integer and exponential draws are implemented here directly.
__extension__ typedef unsigned __int128 uint128;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, bound), Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        uint128 m = static_cast<uint128>(engine_()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<uint128>(engine_()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double exponential() { return -std::log1p(-uniform()); }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

// In-place Fisher-Yates.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(perm), rng);
    return perm;
}

}  // namespace fica
