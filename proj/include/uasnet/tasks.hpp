#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uasnet/snapshot.hpp"
#include "uasnet/world.hpp"

namespace uasnet {

enum class TaskKind { Schedule, Velocity, Path, UavPower, SensorPower };

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view name);

// Key used in the ACTION line: sensor | velocity | direction | power.
std::string_view action_key(TaskKind kind);

struct SensorChoice {
    std::size_t id = 0;
    bool operator==(const SensorChoice&) const = default;
};
struct SpeedChoice {
    double mps = 0.0;
    bool operator==(const SpeedChoice&) const = default;
};
struct DirectionChoice {
    Direction direction = Direction::Hover;
    bool operator==(const DirectionChoice&) const = default;
};
struct PowerChoice {
    double mw = 0.0;
    bool operator==(const PowerChoice&) const = default;
};

using DecisionValue = std::variant<SensorChoice, SpeedChoice, DirectionChoice, PowerChoice>;

struct Decision {
    TaskKind kind = TaskKind::Schedule;
    DecisionValue value;

    bool operator==(const Decision&) const = default;
};

// "sensor=3", "velocity=10", "direction=N", "power=50".
std::string format_action(const Decision& decision);
// The value half of format_action.
std::string format_action_value(const Decision& decision);

// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

struct ActionSpace {
    TaskKind kind = TaskKind::Schedule;
    std::vector<Decision> candidates;

    bool contains(const Decision& d) const;
    bool operator==(const ActionSpace&) const = default;
};

// Throws EmptyActionSpaceError when a Schedule space has no alive sensor.
ActionSpace action_space(TaskKind kind, const WorldState& world);

struct SlotResult {
    CostBreakdown cost;
    std::size_t served_sensor = 0;
    std::uint64_t arrivals = 0;
};

// Runs one slot: apply the decision (including the UAV move), transmit
// from the served sensor, then draw arrivals. For every kind other than
// Schedule the served sensor is the greedy-weighted choice on the
// pre-decision snapshot. Throws ActionError if the decision is not in
// action_space(kind, world).
SlotResult execute(TaskKind kind, WorldState& world, const Decision& decision,
                   const SchedulerWeights& weights = {});

// Loss-only for Schedule/Velocity/Path; power kinds add mu_e * energy.
double compose_cost(TaskKind kind, const CostBreakdown& breakdown, double energy_weight);

}  // namespace uasnet
