#include "uasnet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "uasnet/errors.hpp"

namespace uasnet {

namespace {

double fluid_per(const FluidWorld& w, const FluidSensor& s)
{
    const double h = horizontal_distance(w.uav.position, s.position);
    const double d = std::sqrt(w.uav.altitude * w.uav.altitude + h * h);
    return packet_error_rate(d, w.uav.speed, std::min(w.uav.tx_power, s.tx_power), w.config);
}

// Same scoring as greedy_schedule, on fluid queues and PER at reporting
// precision.
std::size_t fluid_greedy_target(const FluidWorld& w, const SchedulerWeights& weights)
{
    const double qmax = static_cast<double>(w.config.buffer_capacity);
    bool found = false;
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t i = 0; i < w.sensors.size(); ++i) {
        const FluidSensor& s = w.sensors[i];
        if (!s.alive) continue;
        const double score = schedule_score(s.queue / qmax, quantize(fluid_per(w, s), 4), weights);
        if (!found || score > best_score) {
            found = true;
            best = i;
            best_score = score;
        }
    }
    if (!found) throw EmptyActionSpaceError("no alive sensor in fluid world");
    return best;
}

void fluid_move(FluidWorld& w, const FluidSensor* target, Direction heading, double speed)
{
    const Vec2 start = w.uav.position;
    const double step = speed * w.config.slot_duration;
    if (target) {
        w.uav.position = step_toward(start, target->position, step, w.config.area_side);
    } else {
        w.uav.position = step_heading(start, heading, step, w.config.area_side);
    }
    w.uav.speed =
        std::min(w.config.v_max, horizontal_distance(start, w.uav.position) / w.config.slot_duration);
}

struct SearchState {
    TaskKind kind;
    const SchedulerWeights& weights;
    std::vector<Decision> path;
    std::vector<Decision> best_path;
    double best_cost = std::numeric_limits<double>::infinity();
};

void search(SearchState& st, const FluidWorld& world, std::size_t depth_left, double cost_so_far)
{
    if (depth_left == 0) {
        if (cost_so_far < st.best_cost - 1e-9) {
            st.best_cost = cost_so_far;
            st.best_path = st.path;
        }
        return;
    }
    std::vector<Decision> cands;
    try {
        cands = fluid_candidates(st.kind, world);
    } catch (const EmptyActionSpaceError&) {
        // Nothing left to decide; the sequence ends here.
        search(st, world, 0, cost_so_far);
        return;
    }
    for (const Decision& d : cands) {
        FluidWorld next = world;
        const FluidCost c = fluid_step(st.kind, next, d, st.weights);
        st.path.push_back(d);
        search(st, next, depth_left - 1, cost_so_far + c.scalar_cost);
        st.path.pop_back();
    }
}

}  // namespace

FluidWorld to_fluid(const WorldState& world)
{
    FluidWorld f;
    f.config = world.config;
    f.uav = world.uav;
    for (const auto& s : world.sensors) {
        f.sensors.push_back(
            {s.position, static_cast<double>(s.queue_len), s.battery, s.tx_power, s.alive});
    }
    return f;
}

std::vector<Decision> fluid_candidates(TaskKind kind, const FluidWorld& world)
{
    std::vector<Decision> out;
    switch (kind) {
    case TaskKind::Schedule:
        for (std::size_t i = 0; i < world.sensors.size(); ++i) {
            if (world.sensors[i].alive) out.push_back({kind, SensorChoice{i}});
        }
        if (out.empty()) throw EmptyActionSpaceError("all sensors are dead");
        break;
    case TaskKind::Velocity:
        for (double v : world.config.speed_levels) out.push_back({kind, SpeedChoice{v}});
        break;
    case TaskKind::Path:
        for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West,
                            Direction::Hover}) {
            out.push_back({kind, DirectionChoice{d}});
        }
        break;
    case TaskKind::UavPower:
    case TaskKind::SensorPower:
        for (double p : world.config.power_levels) out.push_back({kind, PowerChoice{p}});
        break;
    }
    return out;
}

FluidCost fluid_step(TaskKind kind, FluidWorld& w, const Decision& decision,
                     const SchedulerWeights& weights)
{
    const double cruise = w.config.cruise_speed;
    std::size_t served = 0;
    if (kind == TaskKind::Schedule) {
        served = std::get<SensorChoice>(decision.value).id;
    } else {
        served = fluid_greedy_target(w, weights);
    }
    FluidSensor& target = w.sensors.at(served);

    switch (kind) {
    case TaskKind::Schedule:
        fluid_move(w, &target, Direction::Hover, cruise);
        break;
    case TaskKind::Velocity:
        fluid_move(w, &target, Direction::Hover, std::get<SpeedChoice>(decision.value).mps);
        break;
    case TaskKind::Path: {
        const Direction d = std::get<DirectionChoice>(decision.value).direction;
        fluid_move(w, nullptr, d, d == Direction::Hover ? 0.0 : cruise);
        break;
    }
    case TaskKind::UavPower:
        w.uav.tx_power = std::get<PowerChoice>(decision.value).mw;
        fluid_move(w, &target, Direction::Hover, cruise);
        break;
    case TaskKind::SensorPower:
        target.tx_power = std::get<PowerChoice>(decision.value).mw;
        fluid_move(w, &target, Direction::Hover, cruise);
        break;
    }

    FluidCost cost;
    if (target.alive) {
        const double n = std::min(target.queue, static_cast<double>(w.config.link_capacity));
        const double per = fluid_per(w, target);
        cost.delivered = n * (1.0 - per);
        cost.channel_loss = n * per;
        target.queue -= n;
        const double sensor_energy = target.tx_power * n * w.config.packet_air_time;
        const double uav_energy = w.uav.tx_power * n * w.config.packet_air_time;
        cost.energy_spent = sensor_energy + uav_energy;
        target.battery = std::max(0.0, target.battery - sensor_energy);
        target.alive = target.battery > 0.0;
        w.uav.battery = std::max(0.0, w.uav.battery - uav_energy / 1000.0);
    }

    const double cap = static_cast<double>(w.config.buffer_capacity);
    for (std::size_t i = 0; i < w.sensors.size(); ++i) {
        FluidSensor& s = w.sensors[i];
        const double rate = w.config.arrival_rate(i);
        if (!s.alive) {
            cost.overflow_loss += rate;
            continue;
        }
        s.queue += rate;
        if (s.queue > cap) {
            cost.overflow_loss += s.queue - cap;
            s.queue = cap;
        }
    }

    cost.scalar_cost = cost.overflow_loss + cost.channel_loss;
    if (kind == TaskKind::UavPower || kind == TaskKind::SensorPower) {
        cost.scalar_cost += w.config.energy_weight * cost.energy_spent;
    }
    return cost;
}

Decision brute_force(const WorldState& world, TaskKind kind, std::size_t horizon,
                     const SchedulerWeights& weights)
{
    if (horizon < 1) throw OracleScopeError("brute_force: horizon must be >= 1");
    const FluidWorld root = to_fluid(world);
    const double width = static_cast<double>(fluid_candidates(kind, root).size());
    double nodes = 0.0;
    double level = 1.0;
    for (std::size_t d = 0; d < horizon; ++d) {
        level *= width;
        nodes += level;
        if (nodes > static_cast<double>(kOracleExpansionLimit)) {
            throw OracleScopeError("brute_force: " + std::to_string(static_cast<std::size_t>(width)) +
                                   "^" + std::to_string(horizon) + " sequences exceed the limit of " +
                                   std::to_string(kOracleExpansionLimit) + " expansions");
        }
    }

    SearchState st{kind, weights, {}, {}};
    search(st, root, horizon, 0.0);
    return st.best_path.front();
}

}  // namespace uasnet
