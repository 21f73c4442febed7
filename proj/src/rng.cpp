#include "uasnet/rng.hpp"

#include <cmath>
#include <limits>

namespace uasnet {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

RngStream RngStream::derive(std::uint64_t master_seed, std::string_view name)
{
    return RngStream(splitmix64(master_seed ^ splitmix64(fnv1a64(name))));
}

std::uint64_t RngStream::uniform_index(std::uint64_t n)
{
    // Rejection sampling removes modulo bias.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) {
        x = engine_();
    }
    return x % n;
}

std::uint64_t RngStream::poisson(double mean)
{
    if (mean <= 0.0) {
        return 0;
    }
    const double u = uniform01();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    // The cap only matters when u lands in the float-rounded tail.
    const auto cap = static_cast<std::uint64_t>(mean + 40.0 * std::sqrt(mean) + 40.0);
    while (u >= cdf && k < cap) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

}  // namespace uasnet
