#pragma once

#include <cstddef>
#include <vector>

#include "uasnet/snapshot.hpp"
#include "uasnet/tasks.hpp"
#include "uasnet/world.hpp"

namespace uasnet {

inline constexpr std::size_t kOracleExpansionLimit = 100000;

// Deterministic expected-value copy of a WorldState: arrivals equal the
// mean rate, a transmission of n packets delivers n (1 - PER) and loses
// n PER, and packet counts may be fractional.
struct FluidSensor {
    Vec2 position;
    double queue = 0.0;
    double battery = 0.0;
    double tx_power = 0.0;
    bool alive = true;
};

struct FluidWorld {
    WorldConfig config;
    std::vector<FluidSensor> sensors;
    UavState uav;
};

struct FluidCost {
    double overflow_loss = 0.0;
    double channel_loss = 0.0;
    double delivered = 0.0;
    double energy_spent = 0.0;
    double scalar_cost = 0.0;
};

FluidWorld to_fluid(const WorldState& world);

std::vector<Decision> fluid_candidates(TaskKind kind, const FluidWorld& world);

// One slot with the same ordering as execute(): decision and move,
// transmit, arrivals.
FluidCost fluid_step(TaskKind kind, FluidWorld& world, const Decision& decision,
                     const SchedulerWeights& weights);

// First action of the cheapest length-h action sequence under fluid
// dynamics; ties go to the lexicographically smallest sequence. Throws
// OracleScopeError when the search tree exceeds kOracleExpansionLimit nodes.
Decision brute_force(const WorldState& world, TaskKind kind, std::size_t horizon,
                     const SchedulerWeights& weights = {});

}  // namespace uasnet
