#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace minent {

/// Minimal PCG32 generator (O'Neill's pcg32, XSH-RR output).
///
/// Chosen for its splittable-stream contract: a generator is fully
/// determined by (state seed, stream id), so batch kernels can derive the
/// stream for trajectory k directly from (root_seed, k) with no sequential
/// dependence between samples. Results are identical for any thread count.
class Pcg32 {
public:
    Pcg32(std::uint64_t seed, std::uint64_t stream) : state_(0), inc_((stream << 1u) | 1u) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller. Uses exactly two uniform draws per
    /// call (no cached spare), keeping the draw count reproducible.
    double next_normal() {
        double u1 = 1.0 - next_double();  // (0, 1]
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/// SplitMix64 finalizer; used to derive independent root seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Pure function of (root, index): the seed for sub-task `index` of a run
/// rooted at `root` (training iterations, random-search trials, ...).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    return splitmix64(root ^ splitmix64(index + 1));
}

/// Samples an index from an unnormalized-free probability span: walks the
/// cumulative sum and falls back to the last positive entry against
/// floating-point tail loss.
inline int sample_discrete(std::span<const double> probs, double u) {
    double acc = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] > 0.0) last_positive = static_cast<int>(i);
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return last_positive;
}

}  // namespace minent
