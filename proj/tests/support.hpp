#pragma once

#include <cstdint>
#include <vector>

#include "uasnet/world.hpp"

namespace testing {

// World with hand-placed sensors and no randomness left in placement.
inline uasnet::WorldState world_with(const std::vector<uasnet::Vec2>& positions,
                                     uasnet::WorldConfig cfg = {})
{
    cfg.n_sensors = positions.size();
    uasnet::WorldState w = uasnet::init_world(cfg);
    for (std::size_t i = 0; i < positions.size(); ++i) w.sensors[i].position = positions[i];
    return w;
}

// Small deterministic generator for property tests; independent of the
// library's own streams.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : state_(seed * 2862933555777941757ULL + 3037000493ULL) {}

    std::uint64_t next()
    {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_ >> 11;
    }
    double unit() { return static_cast<double>(next() >> 1) / static_cast<double>(1ULL << 52); }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
    std::uint64_t state_;
};

}  // namespace testing
