#include "uasnet/context.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace uasnet {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string strip_decoration(std::string_view s)
{
    s = trim(s);
    while (!s.empty() && (s.front() == '*' || s.front() == '`')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == '*' || s.back() == '`' || s.back() == '.')) s.remove_suffix(1);
    return std::string(trim(s));
}

std::string upper(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

std::optional<double> parse_real(std::string_view s)
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<std::size_t> parse_index(std::string_view s)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<Direction> parse_direction(std::string_view s)
{
    const std::string u = upper(s);
    for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West,
                        Direction::Hover}) {
        if (u == to_string(d)) return d;
    }
    if (u == "NORTH") return Direction::North;
    if (u == "SOUTH") return Direction::South;
    if (u == "EAST") return Direction::East;
    if (u == "WEST") return Direction::West;
    return std::nullopt;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

std::string_view canonical_goal(TaskKind kind)
{
    switch (kind) {
    case TaskKind::Schedule:
        return "Minimize packet loss from sensor buffer overflows and communication failures by "
               "choosing which ground sensor the UAV collects data from in this slot.";
    case TaskKind::Velocity:
        return "Minimize packet loss from sensor buffer overflows and communication failures by "
               "choosing the UAV speed toward its current collection target.";
    case TaskKind::Path:
        return "Minimize packet loss from sensor buffer overflows and communication failures by "
               "choosing the direction the UAV moves in this slot.";
    case TaskKind::UavPower:
        return "Minimize packet loss and radio energy use by choosing the UAV transmit power "
               "for this slot.";
    case TaskKind::SensorPower:
        return "Minimize packet loss and radio energy use by choosing the transmit power of the "
               "sensor served in this slot.";
    }
    return "";
}

std::vector<std::string> canonical_rules(TaskKind kind)
{
    switch (kind) {
    case TaskKind::Schedule:
        return {"Prioritize sensors with high queue lengths to avoid buffer overflows.",
                "Prioritize sensors with good channel conditions to ensure reliable transmission.",
                "Select exactly one alive sensor from the candidate list."};
    case TaskKind::Velocity:
        return {"Reach the target quickly when it has a high queue length to avoid buffer "
                "overflows.",
                "Slow down near the target so the link keeps good channel conditions.",
                "Select exactly one speed level from the candidate list."};
    case TaskKind::Path:
        return {"Move toward the target sensor, which was chosen for its high queue length.",
                "Shorten the distance to the target to keep good channel conditions.",
                "Select exactly one direction from the candidate list."};
    case TaskKind::UavPower:
        return {"Prioritize sensors with low remaining energy to prevent node failure.",
                "Favor sensors with good channel conditions to ensure reliable transmission.",
                "Use the lowest power that keeps good channel conditions for energy efficiency.",
                "Select exactly one power level from the candidate list."};
    case TaskKind::SensorPower:
        return {"Prioritize sensors with high queue lengths to prevent buffer overflow.",
                "Favor good channel conditions to ensure reliable transmission.",
                "Use the lowest power that keeps good channel conditions for energy efficiency.",
                "Select exactly one power level from the candidate list."};
    }
    return {};
}

std::string snapshot_digest(const StateSnapshot& snapshot)
{
    std::string q;
    std::string per;
    for (const auto& s : snapshot.sensors) {
        if (!q.empty()) {
            q += ',';
            per += ',';
        }
        q += s.alive ? std::to_string(s.queue_len) : std::string("x");
        per += fmt::format("{:.4f}", s.per);
    }
    return fmt::format("uav=({:.1f},{:.1f}) speed={:.1f} queues=[{}] per=[{}]",
                       snapshot.uav.position.x, snapshot.uav.position.y, snapshot.uav.speed, q, per);
}

std::string summarize_feedback(const FeedbackRecord& r)
{
    return fmt::format("slot={} action={} overflow={} channel_loss={} delivered={} energy={:.1f} "
                       "cost={:.4f}",
                       r.slot, format_action(r.action), r.cost.overflow_loss, r.cost.channel_loss,
                       r.cost.delivered, r.cost.energy_spent, r.cost.scalar_cost);
}

std::string output_contract(const ActionSpace& space)
{
    std::string placeholder;
    switch (space.kind) {
    case TaskKind::Schedule: placeholder = "<sensor id>"; break;
    case TaskKind::Velocity: placeholder = "<speed in m/s>"; break;
    case TaskKind::Path: placeholder = "<N|S|E|W|HOVER>"; break;
    case TaskKind::UavPower:
    case TaskKind::SensorPower: placeholder = "<power in mW>"; break;
    }
    std::string candidates;
    for (const auto& c : space.candidates) {
        if (!candidates.empty()) candidates += ", ";
        candidates += format_action_value(c);
    }
    return fmt::format("Reply with exactly one line of the form:\nACTION: {}={}\nCandidates: {}",
                       action_key(space.kind), placeholder, candidates);
}

std::vector<DemonstrationRecord> select_demonstrations(const std::vector<FeedbackRecord>& log,
                                                       std::size_t k_recent, std::size_t k_best)
{
    std::vector<std::size_t> chosen;
    const std::size_t n = log.size();
    const std::size_t recent = std::min(k_recent, n);
    for (std::size_t i = n - recent; i < n; ++i) chosen.push_back(i);

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n - recent; ++i) rest.push_back(i);
    std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
        return log[a].cost.scalar_cost < log[b].cost.scalar_cost;
    });
    for (std::size_t i = 0; i < std::min(k_best, rest.size()); ++i) chosen.push_back(rest[i]);

    std::sort(chosen.begin(), chosen.end(), [&](std::size_t a, std::size_t b) {
        return log[a].slot != log[b].slot ? log[a].slot < log[b].slot : a < b;
    });
    chosen.erase(std::unique(chosen.begin(), chosen.end(),
                             [&](std::size_t a, std::size_t b) { return log[a].slot == log[b].slot; }),
                 chosen.end());

    std::vector<DemonstrationRecord> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) {
        const FeedbackRecord& r = log[i];
        out.push_back({r.slot, r.snapshot_digest, r.action, r.space, r.cost.scalar_cost});
    }
    return out;
}

TaskDescription build_task_description(TaskKind kind, const WorldState& world,
                                       const std::vector<FeedbackRecord>& feedback_log,
                                       const DemonstrationPolicy& policy,
                                       const SchedulerWeights& weights)
{
    TaskDescription desc;
    desc.kind = kind;
    desc.goal = std::string(canonical_goal(kind));
    desc.snapshot = take_snapshot(world);
    if (kind != TaskKind::Schedule && world.alive_count() > 0) {
        desc.target_sensor = greedy_schedule(desc.snapshot, weights);
    }
    desc.rules = canonical_rules(kind);
    desc.demonstrations = select_demonstrations(feedback_log, policy.k_recent, policy.k_best);
    desc.output_schema = output_contract(action_space(kind, world));
    const std::size_t tail = std::min(policy.feedback_window, feedback_log.size());
    for (std::size_t i = feedback_log.size() - tail; i < feedback_log.size(); ++i) {
        desc.feedback_tail.push_back(summarize_feedback(feedback_log[i]));
    }
    return desc;
}

Prompt render_prompt(const TaskDescription& desc, std::string_view system_prompt)
{
    const StateSnapshot& s = desc.snapshot;
    std::string u;
    u.reserve(2048);

    u += "## GOAL\n";
    u += desc.goal;
    u += "\n\n## INPUT DATA\n";
    u += fmt::format("task={} slot={} q_max={} link_capacity={} slot_duration={:.1f} "
                     "cruise_speed={:.1f}",
                     to_string(desc.kind), s.slot, s.buffer_capacity, s.link_capacity,
                     s.slot_duration, s.cruise_speed);
    if (desc.target_sensor) u += fmt::format(" target={}", *desc.target_sensor);
    u += '\n';
    u += fmt::format("uav x={:.1f} y={:.1f} speed={:.1f} power={:.1f} battery={:.1f}\n",
                     s.uav.position.x, s.uav.position.y, s.uav.speed, s.uav.tx_power,
                     s.uav.battery);
    for (const auto& v : s.sensors) {
        u += fmt::format("sensor id={} x={:.1f} y={:.1f} queue={} distance={:.1f} per={:.4f} "
                         "battery={:.1f} power={:.1f} alive={}\n",
                         v.id, v.position.x, v.position.y, v.queue_len, v.distance, v.per,
                         v.battery, v.tx_power, v.alive ? 1 : 0);
    }
    for (const auto& note : desc.input_notes) {
        u += note;
        u += '\n';
    }

    u += "\n## RULES\n";
    for (std::size_t i = 0; i < desc.rules.size(); ++i) {
        u += fmt::format("{}. {}\n", i + 1, desc.rules[i]);
    }

    u += "\n## EXAMPLES\n";
    if (desc.demonstrations.empty()) u += "none\n";
    for (std::size_t i = 0; i < desc.demonstrations.size(); ++i) {
        const auto& d = desc.demonstrations[i];
        u += fmt::format("{}. slot={} state: {} -> ACTION: {} (cost {:.4f})\n", i + 1, d.slot,
                         d.input_summary, format_action(d.action), d.cost);
    }

    u += "\n## OUTPUT FORMAT\n";
    u += desc.output_schema;
    u += "\n\n## FEEDBACK\n";
    if (desc.feedback_tail.empty()) u += "none\n";
    for (const auto& f : desc.feedback_tail) {
        u += f;
        u += '\n';
    }
    return {std::string(system_prompt), std::move(u)};
}

std::string_view to_string(ParseErrorKind kind)
{
    switch (kind) {
    case ParseErrorKind::Malformed: return "malformed";
    case ParseErrorKind::OutOfRange: return "out_of_range";
    case ParseErrorKind::WrongKind: return "wrong_kind";
    }
    return "?";
}

ParseResult parse_decision(std::string_view text, const ActionSpace& space)
{
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string line = strip_decoration(text.substr(pos, end - pos));
        pos = end + 1;

        constexpr std::string_view tag = "ACTION:";
        const std::size_t at = line.find(tag);
        if (at == std::string::npos) continue;
        const std::string_view body = trim(std::string_view(line).substr(at + tag.size()));
        const std::size_t eq = body.find('=');
        if (eq == std::string_view::npos) continue;
        const std::string_view key = trim(body.substr(0, eq));
        const std::string value = strip_decoration(body.substr(eq + 1));
        if (key.empty() || value.empty()) continue;

        if (key != action_key(space.kind)) {
            return ParseError{ParseErrorKind::WrongKind,
                              fmt::format("expected key '{}', got '{}'", action_key(space.kind), key)};
        }

        std::optional<Decision> parsed;
        switch (space.kind) {
        case TaskKind::Schedule:
            if (auto id = parse_index(value)) parsed = Decision{space.kind, SensorChoice{*id}};
            break;
        case TaskKind::Path:
            if (auto d = parse_direction(value)) parsed = Decision{space.kind, DirectionChoice{*d}};
            break;
        case TaskKind::Velocity:
        case TaskKind::UavPower:
        case TaskKind::SensorPower:
            if (auto v = parse_real(value)) {
                // Snap to the configured level so equality with candidates is exact.
                for (const auto& c : space.candidates) {
                    const double level = space.kind == TaskKind::Velocity
                                             ? std::get<SpeedChoice>(c.value).mps
                                             : std::get<PowerChoice>(c.value).mw;
                    if (near(*v, level)) {
                        parsed = c;
                        break;
                    }
                }
                if (!parsed) {
                    return ParseError{ParseErrorKind::OutOfRange,
                                      fmt::format("{} is not a candidate", value)};
                }
            }
            break;
        }
        if (!parsed) {
            return ParseError{ParseErrorKind::Malformed,
                              fmt::format("cannot parse value '{}'", value)};
        }
        if (!space.contains(*parsed)) {
            return ParseError{ParseErrorKind::OutOfRange,
                              fmt::format("{} is not a candidate", format_action(*parsed))};
        }
        return *parsed;
    }
    return ParseError{ParseErrorKind::Malformed, "no 'ACTION: <key>=<value>' line"};
}

}  // namespace uasnet
