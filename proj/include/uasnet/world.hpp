#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

#include "uasnet/rng.hpp"

namespace uasnet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Vec2&) const = default;
};

// Scenario parameters. Defaults give a 10-sensor field under steady
// overflow pressure (offered load twice the link capacity).
struct WorldConfig {
    std::size_t n_sensors = 10;
    double area_side = 1000.0;           // m
    double uav_altitude = 100.0;         // m
    double slot_duration = 1.0;          // s
    std::uint64_t buffer_capacity = 50;  // packets
    // One entry applies to every sensor; otherwise one entry per sensor.
    std::vector<double> arrival_rates{2.0};  // packets / slot
    std::uint64_t link_capacity = 10;        // packets / slot
    double d_ref = 300.0;                    // m
    double v_max = 20.0;                     // m/s
    double velocity_penalty = 0.5;
    std::vector<double> speed_levels{0.0, 5.0, 10.0, 15.0, 20.0};  // m/s
    double cruise_speed = 10.0;                                     // m/s
    std::vector<double> power_levels{10.0, 50.0, 100.0};           // mW
    double reference_power = 100.0;                                 // mW
    double packet_air_time = 0.01;                                  // s
    double sensor_battery_init = 10000.0;                           // mJ
    double uav_battery_init = 100000.0;                             // J
    double energy_weight = 0.01;                                    // cost / mJ
    std::uint64_t rng_seed = 1;

    double arrival_rate(std::size_t sensor) const
    {
        return arrival_rates.size() == 1 ? arrival_rates.front() : arrival_rates.at(sensor);
    }
    double max_power() const;

    // Throws ConfigError naming the first offending field.
    void validate() const;

    bool operator==(const WorldConfig&) const = default;
};

struct SensorState {
    std::size_t id = 0;
    Vec2 position;
    std::uint64_t queue_len = 0;
    double battery = 0.0;  // mJ
    bool alive = true;
    double tx_power = 0.0;  // mW

    bool operator==(const SensorState&) const = default;
};

struct UavState {
    Vec2 position;
    double altitude = 0.0;
    double speed = 0.0;     // m/s, realized over the last move
    double tx_power = 0.0;  // mW
    double battery = 0.0;   // J

    bool operator==(const UavState&) const = default;
};

// Running packet totals; the conservation identity is checked against these.
struct PacketTotals {
    std::uint64_t arrivals = 0;
    std::uint64_t delivered = 0;
    std::uint64_t overflow_loss = 0;
    std::uint64_t channel_loss = 0;

    bool operator==(const PacketTotals&) const = default;
};

struct WorldState {
    WorldConfig config;
    std::vector<SensorState> sensors;
    UavState uav;
    std::uint64_t slot = 0;
    RngStream arrivals_rng;
    RngStream channel_rng;
    PacketTotals totals;

    std::uint64_t queued_packets() const;
    std::size_t alive_count() const;

    bool operator==(const WorldState&) const = default;
};

struct CostBreakdown {
    std::uint64_t overflow_loss = 0;
    std::uint64_t channel_loss = 0;
    std::uint64_t delivered = 0;
    double energy_spent = 0.0;  // mJ, sensor and UAV radios
    double scalar_cost = 0.0;

    bool operator==(const CostBreakdown&) const = default;
};

enum class Direction { North, South, East, West, Hover };

std::string_view to_string(Direction d);

struct HeadingCommand {
    Direction direction = Direction::Hover;
    double speed = 0.0;
};

struct TargetCommand {
    std::size_t sensor = 0;
    double speed = 0.0;
};

using MoveCommand = std::variant<HeadingCommand, TargetCommand>;

struct ArrivalOutcome {
    std::vector<std::uint64_t> overflow;  // per sensor
    std::uint64_t arrivals = 0;
    std::uint64_t overflow_total = 0;
};

struct TransmitOutcome {
    std::uint64_t delivered = 0;
    std::uint64_t lost = 0;
    double sensor_energy = 0.0;  // mJ
    double uav_energy = 0.0;     // mJ
    double per = 0.0;
};

WorldState init_world(const WorldConfig& config);

// Slant range through the UAV's fixed altitude.
double distance(const UavState& uav, const SensorState& sensor);
double horizontal_distance(Vec2 a, Vec2 b);

// PER = 1 - (1 - P_d)(1 - kappa v / v_max), P_d = 1 - exp(-(d/d_ref)^2 P_ref/p).
double packet_error_rate(double d, double v, double p, const WorldConfig& config);

// The link is limited by the weaker radio of the pair.
double link_power(const UavState& uav, const SensorState& sensor);

// PER of the sensor-to-UAV link in the current state.
double link_per(const WorldState& world, std::size_t sensor_id);

// Pure kinematics shared by the simulator and the fluid oracle. Both clamp
// to [0, side]^2; step_toward never overshoots the goal.
Vec2 step_toward(Vec2 from, Vec2 goal, double step, double side);
Vec2 step_heading(Vec2 from, Direction direction, double step, double side);

ArrivalOutcome step_arrivals(WorldState& world);
TransmitOutcome transmit(WorldState& world, std::size_t sensor_id);
void move_uav(WorldState& world, const MoveCommand& command);

}  // namespace uasnet
