#pragma once

#include <cstdint>
#include <random>

namespace ocsmatch {

/// Seedable random source. Wraps std::mt19937_64 (bit-exact across platforms
/// per the standard) and converts to doubles manually so that streams are
/// reproducible from the recorded seed alone.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Fair bit.
    int coin() { return static_cast<int>(engine_() >> 63); }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

/// Counter-based stream split: expands a master seed into per-trial seeds
/// without constructing intermediate engines (splitmix64 finalizer).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace ocsmatch
