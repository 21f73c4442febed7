#include "uasnet/world.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "uasnet/errors.hpp"

namespace uasnet {

namespace {

bool contains_level(const std::vector<double>& levels, double value)
{
    return std::any_of(levels.begin(), levels.end(),
                       [&](double l) { return std::abs(l - value) <= 1e-9; });
}

Vec2 clamp_to_area(Vec2 p, double side)
{
    return {std::clamp(p.x, 0.0, side), std::clamp(p.y, 0.0, side)};
}

}  // namespace

double WorldConfig::max_power() const
{
    return *std::max_element(power_levels.begin(), power_levels.end());
}

void WorldConfig::validate() const
{
    if (n_sensors < 1) throw ConfigError("n_sensors", "must be >= 1");
    if (!(area_side > 0.0)) throw ConfigError("area_side", "must be > 0");
    if (!(uav_altitude >= 0.0)) throw ConfigError("uav_altitude", "must be >= 0");
    if (!(slot_duration > 0.0)) throw ConfigError("slot_duration", "must be > 0");
    if (buffer_capacity < 1) throw ConfigError("buffer_capacity", "must be >= 1");
    if (arrival_rates.size() != 1 && arrival_rates.size() != n_sensors) {
        throw ConfigError("arrival_rate", "needs 1 or n_sensors entries");
    }
    for (double rate : arrival_rates) {
        if (!(rate >= 0.0) || rate > static_cast<double>(buffer_capacity)) {
            throw ConfigError("arrival_rate", "must lie in [0, buffer_capacity]");
        }
    }
    if (link_capacity < 1) throw ConfigError("link_capacity", "must be >= 1");
    if (!(d_ref > 0.0)) throw ConfigError("d_ref", "must be > 0");
    if (!(v_max > 0.0)) throw ConfigError("v_max", "must be > 0");
    if (!(velocity_penalty >= 0.0 && velocity_penalty < 1.0)) {
        throw ConfigError("velocity_penalty", "must lie in [0, 1)");
    }
    if (speed_levels.empty()) throw ConfigError("speed_levels", "must not be empty");
    for (double v : speed_levels) {
        if (!(v >= 0.0 && v <= v_max)) throw ConfigError("speed_levels", "must lie in [0, v_max]");
    }
    if (!contains_level(speed_levels, cruise_speed)) {
        throw ConfigError("cruise_speed", "must be one of speed_levels");
    }
    if (power_levels.empty()) throw ConfigError("power_levels", "must not be empty");
    for (double p : power_levels) {
        if (!(p > 0.0)) throw ConfigError("power_levels", "must all be > 0");
    }
    if (!(reference_power > 0.0)) throw ConfigError("reference_power", "must be > 0");
    if (!(packet_air_time >= 0.0)) throw ConfigError("packet_air_time", "must be >= 0");
    if (!(sensor_battery_init > 0.0)) throw ConfigError("sensor_battery_init", "must be > 0");
    if (!(uav_battery_init >= 0.0)) throw ConfigError("uav_battery_init", "must be >= 0");
    if (!(energy_weight >= 0.0)) throw ConfigError("energy_weight", "must be >= 0");
}

std::uint64_t WorldState::queued_packets() const
{
    std::uint64_t total = 0;
    for (const auto& s : sensors) total += s.queue_len;
    return total;
}

std::size_t WorldState::alive_count() const
{
    return static_cast<std::size_t>(
        std::count_if(sensors.begin(), sensors.end(), [](const SensorState& s) { return s.alive; }));
}

std::string_view to_string(Direction d)
{
    switch (d) {
    case Direction::North: return "N";
    case Direction::South: return "S";
    case Direction::East: return "E";
    case Direction::West: return "W";
    case Direction::Hover: return "HOVER";
    }
    return "?";
}

WorldState init_world(const WorldConfig& config)
{
    config.validate();

    WorldState world;
    world.config = config;
    world.arrivals_rng = RngStream::derive(config.rng_seed, "arrivals");
    world.channel_rng = RngStream::derive(config.rng_seed, "channel");

    RngStream placement = RngStream::derive(config.rng_seed, "placement");
    const double full_power = config.max_power();
    world.sensors.reserve(config.n_sensors);
    for (std::size_t i = 0; i < config.n_sensors; ++i) {
        SensorState s;
        s.id = i;
        s.position.x = placement.uniform(0.0, config.area_side);
        s.position.y = placement.uniform(0.0, config.area_side);
        s.battery = config.sensor_battery_init;
        s.tx_power = full_power;
        world.sensors.push_back(s);
    }

    world.uav.position = {config.area_side / 2.0, config.area_side / 2.0};
    world.uav.altitude = config.uav_altitude;
    world.uav.tx_power = full_power;
    world.uav.battery = config.uav_battery_init;
    return world;
}

double horizontal_distance(Vec2 a, Vec2 b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

double distance(const UavState& uav, const SensorState& sensor)
{
    const double h = horizontal_distance(uav.position, sensor.position);
    return std::sqrt(uav.altitude * uav.altitude + h * h);
}

double packet_error_rate(double d, double v, double p, const WorldConfig& config)
{
    const double ratio = d / config.d_ref;
    const double p_distance = 1.0 - std::exp(-(ratio * ratio) * (config.reference_power / p));
    const double speed_factor = 1.0 - config.velocity_penalty * (v / config.v_max);
    const double per = 1.0 - (1.0 - p_distance) * speed_factor;
    return std::clamp(per, 0.0, 1.0);
}

double link_power(const UavState& uav, const SensorState& sensor)
{
    return std::min(uav.tx_power, sensor.tx_power);
}

double link_per(const WorldState& world, std::size_t sensor_id)
{
    const SensorState& s = world.sensors.at(sensor_id);
    return packet_error_rate(distance(world.uav, s), world.uav.speed, link_power(world.uav, s),
                             world.config);
}

ArrivalOutcome step_arrivals(WorldState& world)
{
    const std::uint64_t cap = world.config.buffer_capacity;
    ArrivalOutcome out;
    out.overflow.assign(world.sensors.size(), 0);
    for (auto& s : world.sensors) {
        const std::uint64_t arrivals = world.arrivals_rng.poisson(world.config.arrival_rate(s.id));
        out.arrivals += arrivals;
        std::uint64_t dropped = 0;
        if (!s.alive) {
            dropped = arrivals;
        } else {
            const std::uint64_t room = cap - s.queue_len;
            dropped = arrivals > room ? arrivals - room : 0;
            s.queue_len += arrivals - dropped;
        }
        out.overflow[s.id] = dropped;
        out.overflow_total += dropped;
    }
    world.totals.arrivals += out.arrivals;
    world.totals.overflow_loss += out.overflow_total;
    ++world.slot;
    return out;
}

TransmitOutcome transmit(WorldState& world, std::size_t sensor_id)
{
    if (sensor_id >= world.sensors.size()) {
        throw ActionError("transmit: sensor id " + std::to_string(sensor_id) + " out of range");
    }
    SensorState& s = world.sensors[sensor_id];
    TransmitOutcome out;
    if (!s.alive) {
        return out;
    }
    const std::uint64_t n = std::min(s.queue_len, world.config.link_capacity);
    out.per = link_per(world, sensor_id);
    for (std::uint64_t k = 0; k < n; ++k) {
        if (world.channel_rng.bernoulli(out.per)) {
            ++out.lost;
        } else {
            ++out.delivered;
        }
    }
    s.queue_len -= n;

    const double packets = static_cast<double>(n);
    out.sensor_energy = s.tx_power * packets * world.config.packet_air_time;
    out.uav_energy = world.uav.tx_power * packets * world.config.packet_air_time;
    s.battery = std::max(0.0, s.battery - out.sensor_energy);
    s.alive = s.battery > 0.0;
    world.uav.battery = std::max(0.0, world.uav.battery - out.uav_energy / 1000.0);

    world.totals.delivered += out.delivered;
    world.totals.channel_loss += out.lost;
    return out;
}

Vec2 step_toward(Vec2 from, Vec2 goal, double step, double side)
{
    const double remaining = horizontal_distance(from, goal);
    if (step >= remaining) {
        return clamp_to_area(goal, side);
    }
    const double f = step / remaining;
    return clamp_to_area({from.x + (goal.x - from.x) * f, from.y + (goal.y - from.y) * f}, side);
}

Vec2 step_heading(Vec2 from, Direction direction, double step, double side)
{
    Vec2 next = from;
    switch (direction) {
    case Direction::North: next.y += step; break;
    case Direction::South: next.y -= step; break;
    case Direction::East: next.x += step; break;
    case Direction::West: next.x -= step; break;
    case Direction::Hover: break;
    }
    return clamp_to_area(next, side);
}

void move_uav(WorldState& world, const MoveCommand& command)
{
    const WorldConfig& cfg = world.config;
    UavState& uav = world.uav;
    const Vec2 start = uav.position;

    if (const auto* heading = std::get_if<HeadingCommand>(&command)) {
        if (heading->direction == Direction::Hover) {
            uav.speed = 0.0;
            return;
        }
        if (!contains_level(cfg.speed_levels, heading->speed)) {
            throw ActionError("move_uav: speed " + std::to_string(heading->speed) +
                              " is not a configured level");
        }
        uav.position = step_heading(start, heading->direction, heading->speed * cfg.slot_duration,
                                    cfg.area_side);
    } else {
        const auto& target = std::get<TargetCommand>(command);
        if (target.sensor >= world.sensors.size()) {
            throw ActionError("move_uav: target sensor " + std::to_string(target.sensor) +
                              " out of range");
        }
        if (!contains_level(cfg.speed_levels, target.speed)) {
            throw ActionError("move_uav: speed " + std::to_string(target.speed) +
                              " is not a configured level");
        }
        uav.position = step_toward(start, world.sensors[target.sensor].position,
                                   target.speed * cfg.slot_duration, cfg.area_side);
    }
    uav.speed = std::min(cfg.v_max, horizontal_distance(start, uav.position) / cfg.slot_duration);
}

}  // namespace uasnet
