#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "uasnet/context.hpp"
#include "uasnet/remote.hpp"
#include "uasnet/rng.hpp"
#include "uasnet/snapshot.hpp"
#include "uasnet/tasks.hpp"

namespace uasnet {

// Everything a backend may look at for one slot. Prompt-driven backends
// only read desc; the brute-force oracle reads the live world.
struct DecisionContext {
    const TaskDescription& desc;
    const ActionSpace& space;
    const WorldState& world;
};

struct BackendResponse {
    Decision decision;
    std::optional<std::string> raw_text;
    double latency_ms = 0.0;
    bool fallback_used = false;
    std::size_t attempts = 0;
};

class DecisionBackend {
public:
    virtual ~DecisionBackend() = default;
    virtual std::string_view name() const = 0;
    // Always returns a member of ctx.space.
    virtual BackendResponse decide(const DecisionContext& ctx) = 0;
};

enum class BackendKind { Random, RoundRobin, MaxQueue, BestChannel, GreedyWeighted, BruteForce,
                         MockLlm, RemoteLlm };

std::string_view to_string(BackendKind kind);
std::optional<BackendKind> parse_backend_kind(std::string_view name);

struct BackendSpec {
    BackendKind kind = BackendKind::GreedyWeighted;
    SchedulerWeights weights;
    std::size_t lookahead = 1;  // brute-force horizon h
    std::size_t max_retries = 0;  // mock LLM only; remote uses remote.max_retries
    RemoteSettings remote;
    std::string system_prompt{kDefaultSystemPrompt};

    bool operator==(const BackendSpec&) const = default;
};

// Throws ConfigError for invalid settings or a backend that cannot serve kind.
std::unique_ptr<DecisionBackend> make_backend(const BackendSpec& spec, TaskKind kind,
                                              std::uint64_t seed,
                                              std::shared_ptr<ChatTransport> transport = nullptr);

// Greedy choice for any task kind. For Schedule this is the weighted
// queue/channel argmax; the other kinds steer the served target:
//   Velocity  - speed level closest to reaching the target in one slot
//   Path      - direction that minimizes the remaining distance to the target
//   power     - one level down on a good link (PER <= 0.2), one up on a
//               poor one (PER >= 0.5), otherwise unchanged
// inverted picks the opposite extreme of each rule.
Decision heuristic_decision(const TaskDescription& desc, const ActionSpace& space,
                            const SchedulerWeights& weights, bool inverted = false);

// Schedule-only form over a snapshot.
Decision greedy_weighted(const StateSnapshot& snapshot, const SchedulerWeights& weights);

// Deterministic stand-in for an LLM: reads the rendered prompt and answers
// with an ACTION line. Normal rules give the greedy choice; inverted rule
// wording, a maximizing goal or an override note in the input give the
// worst-scoring one. A prompt that does not follow the template yields
// text without an ACTION line.
std::string mock_llm(const Prompt& prompt, const SchedulerWeights& weights = {});

}  // namespace uasnet
