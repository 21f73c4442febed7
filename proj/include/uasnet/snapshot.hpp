#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "uasnet/world.hpp"

namespace uasnet {

// Decision-facing view of a WorldState. Every real value is rounded to the
// precision it is printed with in prompts (positions, distances, speed,
// power and battery to 0.1; PER to 1e-4), so a decision computed from the
// snapshot and one computed from its rendered text agree exactly.
struct SensorSnapshot {
    std::size_t id = 0;
    Vec2 position;
    std::uint64_t queue_len = 0;
    double distance = 0.0;
    double per = 0.0;
    double battery = 0.0;
    double tx_power = 0.0;
    bool alive = true;

    bool operator==(const SensorSnapshot&) const = default;
};

struct UavSnapshot {
    Vec2 position;
    double speed = 0.0;
    double tx_power = 0.0;
    double battery = 0.0;

    bool operator==(const UavSnapshot&) const = default;
};

struct StateSnapshot {
    std::uint64_t slot = 0;
    std::uint64_t buffer_capacity = 1;
    std::uint64_t link_capacity = 1;
    double slot_duration = 1.0;
    double cruise_speed = 0.0;
    UavSnapshot uav;
    std::vector<SensorSnapshot> sensors;

    bool operator==(const StateSnapshot&) const = default;
};

double quantize(double value, int decimals);

StateSnapshot take_snapshot(const WorldState& world);

struct SchedulerWeights {
    double queue = 0.5;
    double channel = 0.5;

    // w_queue, w_channel >= 0 and not both zero.
    void validate() const;

    bool operator==(const SchedulerWeights&) const = default;
};

// w_q * (queue / Q_max) + w_c * (1 - PER). The signs flip either term,
// which is how inverted priorities are scored.
double schedule_score(double queue_fraction, double per, const SchedulerWeights& w,
                      int queue_sign = 1, int channel_sign = 1);

// Highest-scoring alive sensor, ties to the lowest id.
// Throws EmptyActionSpaceError when no sensor is alive.
std::size_t greedy_schedule(const StateSnapshot& snapshot, const SchedulerWeights& w,
                            int queue_sign = 1, int channel_sign = 1);

}  // namespace uasnet
