#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace adabridge {

// FNV-1a, used to turn stream names into 64-bit stream ids.
constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic per-stream generator. Every random quantity in a run is
// drawn from a StreamRng whose engine is seeded with (run seed XOR stream id),
// so independent streams never share state and identical (seed, stream name)
// pairs replay identically.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::string_view stream)
        : eng_(seed ^ fnv1a64(stream)) {}

    std::uint64_t bits() { return eng_(); }

    // Uniform in [0, 1) with 53 random mantissa bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller without spare caching; consumes exactly two uniforms per draw.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return r * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng_() % n; }

private:
    std::mt19937_64 eng_;
};

}  // namespace adabridge
