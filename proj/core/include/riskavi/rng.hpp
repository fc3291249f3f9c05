#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace riskavi {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Combine a master seed with stream coordinates into one stream key.
/// Streams keyed on distinct coordinate tuples are statistically independent,
/// which makes results invariant to evaluation order and thread count.
inline std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x2545f4914f6cdd1dULL;
    for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
    return h;
}

/// Counter-based 64-bit generator (splitmix64 sequence).
/// Cheap to construct, so one instance per (seed, iteration, state, action)
/// stream is the intended usage.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() { return mix64(state_++); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Exponential with the given rate, via inverse CDF so that draws are
    /// bit-identical across platforms.
    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

    /// Uniform index in {0, ..., n-1}.
    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

private:
    std::uint64_t state_;
};

}  // namespace riskavi
