#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace skglass {

// splitmix64 (Steele/Lea/Flood). The generator is pinned by contract: coupling
// matrices must regenerate bit-for-bit from (n, seed) on any platform, so we
// do not go through std::mt19937 / std::normal_distribution, whose outputs
// are not specified tightly enough.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
};

/// Per-sample seed schedule: one splitmix64 step of (master + index).
/// Part of the public ensemble contract so independent implementations can
/// produce comparable ensembles.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t sample_index) {
    SplitMix64 s{master_seed + sample_index};
    return s.next();
}

/// Map 64 random bits to a double in [0, 1) using the top 53 bits.
inline double to_unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Standard normal deviates from a splitmix64 stream via the Box-Muller
/// transform, consuming exactly two 64-bit draws per pair of normals.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : rng_{seed} {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // First draw shifted into (0, 1] so the log is finite.
        const double u1 = (static_cast<double>(rng_.next() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = to_unit_interval(rng_.next());
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Uniform variates and bounded indices for Monte Carlo proposals.
class UniformStream {
public:
    explicit UniformStream(std::uint64_t seed) : rng_{seed} {}

    std::uint64_t next_bits() { return rng_.next(); }

    double next_unit() { return to_unit_interval(rng_.next()); }

    /// Index in [0, bound) by multiply-shift; bias < bound/2^64.
    std::uint32_t next_index(std::uint32_t bound) {
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(rng_.next()) * bound) >> 64);
    }

private:
    SplitMix64 rng_;
};

} // namespace skglass
