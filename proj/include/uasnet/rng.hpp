#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace uasnet {

// Portable random stream. std::mt19937_64 has a standardized output
// sequence; every distribution below is implemented here because the
// standard library distributions differ between implementations.
class RngStream {
public:
    RngStream() : RngStream(0) {}
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    // Independent named stream derived from a master seed.
    static RngStream derive(std::uint64_t master_seed, std::string_view name);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

    // Poisson by sequential CDF inversion; one uniform per draw.
    std::uint64_t poisson(double mean);

    bool operator==(const RngStream&) const = default;

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace uasnet
