#include "uasnet/tasks.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "uasnet/errors.hpp"

namespace uasnet {

std::string_view to_string(TaskKind kind)
{
    switch (kind) {
    case TaskKind::Schedule: return "schedule";
    case TaskKind::Velocity: return "velocity";
    case TaskKind::Path: return "path";
    case TaskKind::UavPower: return "uav_power";
    case TaskKind::SensorPower: return "sensor_power";
    }
    return "?";
}

std::optional<TaskKind> parse_task_kind(std::string_view name)
{
    for (TaskKind k : {TaskKind::Schedule, TaskKind::Velocity, TaskKind::Path, TaskKind::UavPower,
                       TaskKind::SensorPower}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view action_key(TaskKind kind)
{
    switch (kind) {
    case TaskKind::Schedule: return "sensor";
    case TaskKind::Velocity: return "velocity";
    case TaskKind::Path: return "direction";
    case TaskKind::UavPower:
    case TaskKind::SensorPower: return "power";
    }
    return "?";
}

std::string format_number(double value)
{
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

std::string format_action_value(const Decision& decision)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SensorChoice>) {
                return std::to_string(v.id);
            } else if constexpr (std::is_same_v<T, SpeedChoice>) {
                return format_number(v.mps);
            } else if constexpr (std::is_same_v<T, DirectionChoice>) {
                return std::string(to_string(v.direction));
            } else {
                return format_number(v.mw);
            }
        },
        decision.value);
}

std::string format_action(const Decision& decision)
{
    return std::string(action_key(decision.kind)) + "=" + format_action_value(decision);
}

bool ActionSpace::contains(const Decision& d) const
{
    return std::find(candidates.begin(), candidates.end(), d) != candidates.end();
}

ActionSpace action_space(TaskKind kind, const WorldState& world)
{
    ActionSpace space{kind, {}};
    switch (kind) {
    case TaskKind::Schedule:
        for (const auto& s : world.sensors) {
            if (s.alive) space.candidates.push_back({kind, SensorChoice{s.id}});
        }
        if (space.candidates.empty()) throw EmptyActionSpaceError("all sensors are dead");
        break;
    case TaskKind::Velocity:
        for (double v : world.config.speed_levels) space.candidates.push_back({kind, SpeedChoice{v}});
        break;
    case TaskKind::Path:
        for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West,
                            Direction::Hover}) {
            space.candidates.push_back({kind, DirectionChoice{d}});
        }
        break;
    case TaskKind::UavPower:
    case TaskKind::SensorPower:
        for (double p : world.config.power_levels) space.candidates.push_back({kind, PowerChoice{p}});
        break;
    }
    return space;
}

SlotResult execute(TaskKind kind, WorldState& world, const Decision& decision,
                   const SchedulerWeights& weights)
{
    if (decision.kind != kind) {
        throw ActionError("execute: decision kind does not match task kind");
    }
    if (!action_space(kind, world).contains(decision)) {
        throw ActionError("execute: " + format_action(decision) + " is not a valid action");
    }

    std::size_t served = 0;
    if (kind == TaskKind::Schedule) {
        served = std::get<SensorChoice>(decision.value).id;
    } else {
        served = greedy_schedule(take_snapshot(world), weights);
    }
    const double cruise = world.config.cruise_speed;

    switch (kind) {
    case TaskKind::Schedule:
        move_uav(world, TargetCommand{served, cruise});
        break;
    case TaskKind::Velocity:
        move_uav(world, TargetCommand{served, std::get<SpeedChoice>(decision.value).mps});
        break;
    case TaskKind::Path: {
        const Direction d = std::get<DirectionChoice>(decision.value).direction;
        move_uav(world, HeadingCommand{d, d == Direction::Hover ? 0.0 : cruise});
        break;
    }
    case TaskKind::UavPower:
        world.uav.tx_power = std::get<PowerChoice>(decision.value).mw;
        move_uav(world, TargetCommand{served, cruise});
        break;
    case TaskKind::SensorPower:
        world.sensors[served].tx_power = std::get<PowerChoice>(decision.value).mw;
        move_uav(world, TargetCommand{served, cruise});
        break;
    }

    const TransmitOutcome tx = transmit(world, served);
    const ArrivalOutcome arrivals = step_arrivals(world);

    SlotResult result;
    result.served_sensor = served;
    result.arrivals = arrivals.arrivals;
    result.cost.overflow_loss = arrivals.overflow_total;
    result.cost.channel_loss = tx.lost;
    result.cost.delivered = tx.delivered;
    result.cost.energy_spent = tx.sensor_energy + tx.uav_energy;
    result.cost.scalar_cost = compose_cost(kind, result.cost, world.config.energy_weight);
    return result;
}

double compose_cost(TaskKind kind, const CostBreakdown& breakdown, double energy_weight)
{
    const double loss =
        static_cast<double>(breakdown.overflow_loss) + static_cast<double>(breakdown.channel_loss);
    switch (kind) {
    case TaskKind::UavPower:
    case TaskKind::SensorPower:
        return loss + energy_weight * breakdown.energy_spent;
    default:
        return loss;
    }
}

}  // namespace uasnet
