#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uasnet/adversary.hpp"
#include "uasnet/backends.hpp"
#include "uasnet/context.hpp"
#include "uasnet/tasks.hpp"
#include "uasnet/world.hpp"

namespace uasnet {

struct SlotRow {
    std::uint64_t slot = 0;
    std::string action;
    std::uint64_t overflow_loss = 0;
    std::uint64_t channel_loss = 0;
    std::uint64_t delivered = 0;
    double energy_mj = 0.0;
    double scalar_cost = 0.0;
    bool fallback_used = false;
    bool attack_applied = false;
    std::uint64_t arrivals = 0;  // not part of the CSV layout
};

struct EpisodeTotals {
    std::uint64_t overflow_loss = 0;
    std::uint64_t channel_loss = 0;
    std::uint64_t delivered = 0;
    std::uint64_t arrivals = 0;
    double energy_mj = 0.0;
    double cost = 0.0;
    std::size_t fallbacks = 0;
    std::size_t attacks = 0;

    // Delivered packets per millijoule; 0 when nothing was spent.
    double energy_efficiency() const { return energy_mj > 0.0 ? delivered / energy_mj : 0.0; }
};

struct EpisodeMetrics {
    std::vector<SlotRow> rows;
    std::vector<Decision> decisions;
    std::vector<FeedbackRecord> feedback;
    EpisodeTotals totals;
    bool complete = true;           // false when the backend failed hard
    bool terminated_early = false;  // every sensor died
    std::string failure;
    double wall_clock_s = 0.0;
    std::string config_digest;
    std::uint64_t seed = 0;
};

struct EpisodeOptions {
    TaskKind kind = TaskKind::Schedule;
    std::size_t horizon = 1;
    DemonstrationPolicy policy;
    SchedulerWeights weights;
    std::optional<AttackSpec> attack;
};

// Closed loop: snapshot -> task description -> optional attack -> decide
// -> validate -> execute -> feedback. Advances world in place.
EpisodeMetrics run_episode(WorldState& world, DecisionBackend& backend,
                           const EpisodeOptions& options);

// attacked.cost / max(normal.cost, epsilon). Throws MetricError if either
// episode is incomplete.
Degradation degradation_ratio(const EpisodeMetrics& normal, const EpisodeMetrics& attacked);

}  // namespace uasnet
