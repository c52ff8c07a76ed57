#pragma once

#include <cstdint>
#include <vector>

namespace playa {

// Deterministic PRNG used everywhere randomness is needed. The standard
// library distributions are implementation-defined, so draws are built by
// hand from the raw 64-bit stream; seeded results are identical across
// compilers and platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // splitmix64 step.
    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit mantissa. One u64 draw.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi). One u64 draw.
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Unbiased integer in [0, n) via rejection. At least one u64 draw.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    // Standard normal via Box-Muller, no caching. Two u64 draws per call.
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return box_muller(u1, u2);
    }

private:
    static double box_muller(double u1, double u2);

    std::uint64_t state_;
};

// Combines two seeds into one; splitmix64 finalizer over a weighted sum.
// Used for per-playa sampling streams and per-epoch shuffles so results do
// not depend on processing order.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b);

// In-place Fisher-Yates with pinned draw order.
void shuffle_indices(std::vector<int>& indices, Rng& rng);

} // namespace playa
