#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "uasnet/snapshot.hpp"
#include "uasnet/tasks.hpp"
#include "uasnet/world.hpp"

namespace uasnet {

// Prompt template revision; bump when the rendered layout changes.
inline constexpr std::string_view kPromptFormatVersion = "uasnet-prompt/1";

inline constexpr std::string_view kDefaultSystemPrompt =
    "You are the data collector of a public-safety UAV that serves ground sensors in a "
    "disaster area. Follow the operating rules, never take actions outside the candidate "
    "list, and answer with the requested ACTION line.";

struct FeedbackRecord {
    std::uint64_t slot = 0;
    std::string snapshot_digest;
    Decision action;
    ActionSpace space;  // the space the action was chosen from
    CostBreakdown cost;
};

struct DemonstrationRecord {
    std::uint64_t slot = 0;
    std::string input_summary;
    Decision action;
    ActionSpace space;
    double cost = 0.0;

    bool operator==(const DemonstrationRecord&) const = default;
};

struct DemonstrationPolicy {
    std::size_t k_recent = 5;
    std::size_t k_best = 2;
    std::size_t feedback_window = 3;

    bool operator==(const DemonstrationPolicy&) const = default;
};

struct TaskDescription {
    TaskKind kind = TaskKind::Schedule;
    std::string goal;
    StateSnapshot snapshot;
    // Sensor served this slot when the decision is not itself a schedule.
    std::optional<std::size_t> target_sensor;
    std::vector<std::string> input_notes;
    std::vector<std::string> rules;
    std::vector<DemonstrationRecord> demonstrations;
    std::string output_schema;
    std::vector<std::string> feedback_tail;

    bool operator==(const TaskDescription&) const = default;
};

struct Prompt {
    std::string system;
    std::string user;

    bool operator==(const Prompt&) const = default;
};

std::string_view canonical_goal(TaskKind kind);
std::vector<std::string> canonical_rules(TaskKind kind);

// Compact single-line digest of the decision-relevant state.
std::string snapshot_digest(const StateSnapshot& snapshot);
std::string summarize_feedback(const FeedbackRecord& record);
std::string output_contract(const ActionSpace& space);

// Recency plus elitism: the k_recent latest records and the k_best cheapest
// of the rest, deduplicated by slot and ordered oldest to newest.
std::vector<DemonstrationRecord> select_demonstrations(const std::vector<FeedbackRecord>& log,
                                                       std::size_t k_recent, std::size_t k_best);

TaskDescription build_task_description(TaskKind kind, const WorldState& world,
                                       const std::vector<FeedbackRecord>& feedback_log,
                                       const DemonstrationPolicy& policy,
                                       const SchedulerWeights& weights = {});

Prompt render_prompt(const TaskDescription& desc,
                     std::string_view system_prompt = kDefaultSystemPrompt);

enum class ParseErrorKind { Malformed, OutOfRange, WrongKind };

std::string_view to_string(ParseErrorKind kind);

struct ParseError {
    ParseErrorKind kind = ParseErrorKind::Malformed;
    std::string detail;
};

using ParseResult = std::variant<Decision, ParseError>;

// The first line carrying "ACTION: <key>=<value>" decides; the rest of the
// text is ignored.
ParseResult parse_decision(std::string_view text, const ActionSpace& space);

}  // namespace uasnet
