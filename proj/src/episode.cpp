#include "uasnet/episode.hpp"

#include <algorithm>
#include <chrono>

#include "uasnet/errors.hpp"

namespace uasnet {

EpisodeMetrics run_episode(WorldState& world, DecisionBackend& backend,
                           const EpisodeOptions& options)
{
    if (options.horizon < 1) throw ConfigError("horizon", "must be >= 1");
    const auto start = std::chrono::steady_clock::now();

    EpisodeMetrics m;
    m.seed = world.config.rng_seed;
    RngStream attack_rng = RngStream::derive(world.config.rng_seed, "attack");

    for (std::size_t t = 0; t < options.horizon; ++t) {
        // Every kind serves some sensor, so a field with none alive ends the run.
        if (world.alive_count() == 0) {
            m.terminated_early = true;
            break;
        }
        const ActionSpace space = action_space(options.kind, world);

        const TaskDescription clean =
            build_task_description(options.kind, world, m.feedback, options.policy, options.weights);
        TaskDescription shown = clean;
        bool attacked = false;
        if (options.attack) {
            AttackOutcome a = apply_attack(clean, *options.attack, attack_rng);
            shown = std::move(a.desc);
            attacked = a.applied;
        }

        BackendResponse response;
        try {
            response = backend.decide({shown, space, world});
        } catch (const std::exception& e) {
            m.complete = false;
            m.failure = std::string(backend.name()) + ": " + e.what();
            break;
        }
        if (!space.contains(response.decision)) {
            response.decision = heuristic_decision(clean, space, options.weights);
            response.fallback_used = true;
        }

        const std::uint64_t slot = world.slot;
        const SlotResult result = execute(options.kind, world, response.decision, options.weights);

        SlotRow row;
        row.slot = slot;
        row.action = format_action(response.decision);
        row.overflow_loss = result.cost.overflow_loss;
        row.channel_loss = result.cost.channel_loss;
        row.delivered = result.cost.delivered;
        row.energy_mj = result.cost.energy_spent;
        row.scalar_cost = result.cost.scalar_cost;
        row.fallback_used = response.fallback_used;
        row.attack_applied = attacked;
        row.arrivals = result.arrivals;

        EpisodeTotals& tot = m.totals;
        tot.overflow_loss += row.overflow_loss;
        tot.channel_loss += row.channel_loss;
        tot.delivered += row.delivered;
        tot.arrivals += row.arrivals;
        tot.energy_mj += row.energy_mj;
        tot.cost += row.scalar_cost;
        tot.fallbacks += row.fallback_used ? 1 : 0;
        tot.attacks += row.attack_applied ? 1 : 0;

        m.rows.push_back(std::move(row));
        m.decisions.push_back(response.decision);
        m.feedback.push_back(
            {slot, snapshot_digest(clean.snapshot), response.decision, space, result.cost});
    }
    m.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return m;
}

Degradation degradation_ratio(const EpisodeMetrics& normal, const EpisodeMetrics& attacked)
{
    if (!normal.complete || !attacked.complete) {
        throw MetricError("degradation_ratio: both episodes must be complete");
    }
    Degradation d;
    d.degenerate = normal.totals.cost < kDegradationEpsilon;
    d.ratio = attacked.totals.cost / std::max(normal.totals.cost, kDegradationEpsilon);
    return d;
}

}  // namespace uasnet
