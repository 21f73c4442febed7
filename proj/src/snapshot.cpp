#include "uasnet/snapshot.hpp"

#include <cmath>

#include "uasnet/errors.hpp"

namespace uasnet {

double quantize(double value, int decimals)
{
    const double scale = std::pow(10.0, decimals);
    // Division by an exact power of ten yields the same double strtod
    // produces for the printed digits.
    return std::round(value * scale) / scale;
}

StateSnapshot take_snapshot(const WorldState& world)
{
    StateSnapshot snap;
    snap.slot = world.slot;
    snap.buffer_capacity = world.config.buffer_capacity;
    snap.link_capacity = world.config.link_capacity;
    snap.slot_duration = world.config.slot_duration;
    snap.cruise_speed = world.config.cruise_speed;
    snap.uav.position = {quantize(world.uav.position.x, 1), quantize(world.uav.position.y, 1)};
    snap.uav.speed = quantize(world.uav.speed, 1);
    snap.uav.tx_power = quantize(world.uav.tx_power, 1);
    snap.uav.battery = quantize(world.uav.battery, 1);
    snap.sensors.reserve(world.sensors.size());
    for (const auto& s : world.sensors) {
        SensorSnapshot v;
        v.id = s.id;
        v.position = {quantize(s.position.x, 1), quantize(s.position.y, 1)};
        v.queue_len = s.queue_len;
        v.distance = quantize(distance(world.uav, s), 1);
        v.per = quantize(link_per(world, s.id), 4);
        v.battery = quantize(s.battery, 1);
        v.tx_power = quantize(s.tx_power, 1);
        v.alive = s.alive;
        snap.sensors.push_back(v);
    }
    return snap;
}

void SchedulerWeights::validate() const
{
    if (!(queue >= 0.0)) throw ConfigError("w_queue", "must be >= 0");
    if (!(channel >= 0.0)) throw ConfigError("w_channel", "must be >= 0");
    if (!(queue + channel > 0.0)) throw ConfigError("w_queue", "w_queue + w_channel must be > 0");
}

double schedule_score(double queue_fraction, double per, const SchedulerWeights& w,
                      int queue_sign, int channel_sign)
{
    return queue_sign * w.queue * queue_fraction + channel_sign * w.channel * (1.0 - per);
}

std::size_t greedy_schedule(const StateSnapshot& snapshot, const SchedulerWeights& w,
                            int queue_sign, int channel_sign)
{
    const double qmax = static_cast<double>(snapshot.buffer_capacity);
    bool found = false;
    std::size_t best = 0;
    double best_score = 0.0;
    for (const auto& s : snapshot.sensors) {
        if (!s.alive) continue;
        const double score = schedule_score(static_cast<double>(s.queue_len) / qmax, s.per, w,
                                            queue_sign, channel_sign);
        if (!found || score > best_score) {
            found = true;
            best = s.id;
            best_score = score;
        }
    }
    if (!found) throw EmptyActionSpaceError("no alive sensor to schedule");
    return best;
}

}  // namespace uasnet
