#include "uasnet/backends.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "uasnet/errors.hpp"
#include "uasnet/oracle.hpp"

namespace uasnet {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

const SensorSnapshot& sensor_at(const StateSnapshot& snap, std::size_t id)
{
    for (const auto& s : snap.sensors) {
        if (s.id == id) return s;
    }
    throw ActionError("snapshot has no sensor " + std::to_string(id));
}

double level_of(const Decision& d)
{
    if (const auto* v = std::get_if<SpeedChoice>(&d.value)) return v->mps;
    if (const auto* p = std::get_if<PowerChoice>(&d.value)) return p->mw;
    return 0.0;
}

// First candidate minimizing key (or maximizing when inverted).
template <class Key>
Decision pick_extreme(const ActionSpace& space, bool inverted, Key key)
{
    std::size_t best = 0;
    double best_key = key(space.candidates[0]);
    for (std::size_t i = 1; i < space.candidates.size(); ++i) {
        const double k = key(space.candidates[i]);
        if (inverted ? k > best_key : k < best_key) {
            best = i;
            best_key = k;
        }
    }
    return space.candidates[best];
}

class RandomBackend final : public DecisionBackend {
public:
    explicit RandomBackend(std::uint64_t seed) : rng_(RngStream::derive(seed, "backend")) {}
    std::string_view name() const override { return "random"; }
    BackendResponse decide(const DecisionContext& ctx) override
    {
        BackendResponse r;
        r.decision = ctx.space.candidates[rng_.uniform_index(ctx.space.candidates.size())];
        r.attempts = 1;
        return r;
    }

private:
    RngStream rng_;
};

// Cycles through candidates in their canonical order, skipping ones that
// have left the space (dead sensors).
class RoundRobinBackend final : public DecisionBackend {
public:
    std::string_view name() const override { return "round_robin"; }
    BackendResponse decide(const DecisionContext& ctx) override
    {
        const auto& cands = ctx.space.candidates;
        std::size_t pick = 0;
        if (last_) {
            const auto next = std::find_if(cands.begin(), cands.end(), [&](const Decision& d) {
                return order_key(d) > *last_;
            });
            pick = next == cands.end() ? 0 : static_cast<std::size_t>(next - cands.begin());
        }
        last_ = order_key(cands[pick]);
        BackendResponse r;
        r.decision = cands[pick];
        r.attempts = 1;
        return r;
    }

private:
    static double order_key(const Decision& d)
    {
        if (const auto* s = std::get_if<SensorChoice>(&d.value)) return static_cast<double>(s->id);
        if (const auto* dir = std::get_if<DirectionChoice>(&d.value)) {
            return static_cast<double>(static_cast<int>(dir->direction));
        }
        return level_of(d);
    }

    std::optional<double> last_;
};

class MaxQueueBackend final : public DecisionBackend {
public:
    std::string_view name() const override { return "max_queue"; }
    BackendResponse decide(const DecisionContext& ctx) override
    {
        BackendResponse r;
        r.decision = pick_extreme(ctx.space, true, [&](const Decision& d) {
            return static_cast<double>(
                sensor_at(ctx.desc.snapshot, std::get<SensorChoice>(d.value).id).queue_len);
        });
        r.attempts = 1;
        return r;
    }
};

class BestChannelBackend final : public DecisionBackend {
public:
    std::string_view name() const override { return "best_channel"; }
    BackendResponse decide(const DecisionContext& ctx) override
    {
        BackendResponse r;
        r.decision = pick_extreme(ctx.space, false, [&](const Decision& d) {
            return sensor_at(ctx.desc.snapshot, std::get<SensorChoice>(d.value).id).per;
        });
        r.attempts = 1;
        return r;
    }
};

class GreedyWeightedBackend final : public DecisionBackend {
public:
    explicit GreedyWeightedBackend(SchedulerWeights w) : weights_(w) {}
    std::string_view name() const override { return "greedy_weighted"; }
    BackendResponse decide(const DecisionContext& ctx) override
    {
        BackendResponse r;
        r.decision = heuristic_decision(ctx.desc, ctx.space, weights_);
        r.attempts = 1;
        return r;
    }

private:
    SchedulerWeights weights_;
};

class BruteForceBackend final : public DecisionBackend {
public:
    BruteForceBackend(std::size_t horizon, SchedulerWeights w) : horizon_(horizon), weights_(w) {}
    std::string_view name() const override { return "brute_force"; }
    BackendResponse decide(const DecisionContext& ctx) override
    {
        BackendResponse r;
        r.decision = brute_force(ctx.world, ctx.space.kind, horizon_, weights_);
        r.attempts = 1;
        return r;
    }

private:
    std::size_t horizon_;
    SchedulerWeights weights_;
};

// Shared retry/fallback loop of the prompt-driven backends.
class PromptBackend : public DecisionBackend {
public:
    PromptBackend(SchedulerWeights w, std::string system_prompt)
        : weights_(w), system_prompt_(std::move(system_prompt))
    {
    }

    BackendResponse fallback(const DecisionContext& ctx, BackendResponse r) const
    {
        r.decision = heuristic_decision(ctx.desc, ctx.space, weights_);
        r.fallback_used = true;
        return r;
    }

protected:
    SchedulerWeights weights_;
    std::string system_prompt_;
};

class MockLlmBackend final : public PromptBackend {
public:
    MockLlmBackend(SchedulerWeights w, std::string system_prompt, std::size_t max_retries)
        : PromptBackend(w, std::move(system_prompt)), max_retries_(max_retries)
    {
    }
    std::string_view name() const override { return "mock_llm"; }
    BackendResponse decide(const DecisionContext& ctx) override
    {
        const auto start = Clock::now();
        const Prompt prompt = render_prompt(ctx.desc, system_prompt_);
        BackendResponse r;
        for (std::size_t attempt = 0; attempt <= max_retries_; ++attempt) {
            ++r.attempts;
            r.raw_text = mock_llm(prompt, weights_);
            const ParseResult parsed = parse_decision(*r.raw_text, ctx.space);
            if (const auto* d = std::get_if<Decision>(&parsed)) {
                r.decision = *d;
                r.latency_ms = elapsed_ms(start);
                return r;
            }
        }
        r.latency_ms = elapsed_ms(start);
        return fallback(ctx, std::move(r));
    }

private:
    std::size_t max_retries_;
};

class RemoteLlmBackend final : public PromptBackend {
public:
    RemoteLlmBackend(SchedulerWeights w, std::string system_prompt, RemoteSettings settings,
                     std::shared_ptr<ChatTransport> transport)
        : PromptBackend(w, std::move(system_prompt)),
          settings_(std::move(settings)),
          transport_(std::move(transport))
    {
    }
    std::string_view name() const override { return "remote_llm"; }

    // Every attempt and backoff sleep is clipped to one shared deadline of
    // (max_retries + 1) * timeout.
    BackendResponse decide(const DecisionContext& ctx) override
    {
        using std::chrono::milliseconds;
        const auto start = Clock::now();
        const auto timeout = milliseconds(settings_.timeout_ms);
        const auto deadline = start + timeout * static_cast<long>(settings_.max_retries + 1);

        const Prompt prompt = render_prompt(ctx.desc, system_prompt_);
        const ChatRequest request{settings_.model, prompt.system, prompt.user,
                                  settings_.temperature};
        BackendResponse r;
        for (std::size_t attempt = 0; attempt <= settings_.max_retries; ++attempt) {
            const auto remaining =
                std::chrono::duration_cast<milliseconds>(deadline - Clock::now());
            if (remaining.count() <= 0) break;
            ++r.attempts;
            const TransportReply reply = transport_->post_chat(request, std::min(timeout, remaining));
            if (reply.ok()) {
                r.raw_text = reply.content;
                const ParseResult parsed = parse_decision(reply.content, ctx.space);
                if (const auto* d = std::get_if<Decision>(&parsed)) {
                    r.decision = *d;
                    r.latency_ms = elapsed_ms(start);
                    return r;
                }
            } else if (reply.retry_with_backoff() && attempt < settings_.max_retries) {
                const auto backoff = milliseconds(settings_.backoff_base_ms) * (1L << attempt);
                const auto left = std::chrono::duration_cast<milliseconds>(deadline - Clock::now());
                std::this_thread::sleep_for(std::max(milliseconds(0), std::min(backoff, left)));
            }
        }
        r.latency_ms = elapsed_ms(start);
        return fallback(ctx, std::move(r));
    }

private:
    RemoteSettings settings_;
    std::shared_ptr<ChatTransport> transport_;
};

// --- mock LLM prompt reader ---

struct ParsedPrompt {
    TaskDescription desc;
    ActionSpace space;
};

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::map<std::string, std::string> key_values(std::string_view line)
{
    std::map<std::string, std::string> kv;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const std::size_t end = std::min(line.find(' ', pos), line.size());
        const std::string_view tok = line.substr(pos, end - pos);
        const std::size_t eq = tok.find('=');
        if (eq != std::string_view::npos) {
            kv.emplace(std::string(tok.substr(0, eq)), std::string(tok.substr(eq + 1)));
        }
        pos = end + 1;
    }
    return kv;
}

double to_real(const std::map<std::string, std::string>& kv, const std::string& key)
{
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing " + key);
    double v = 0.0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad " + key);
    return v;
}

std::uint64_t to_count(const std::map<std::string, std::string>& kv, const std::string& key)
{
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing " + key);
    std::uint64_t v = 0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad " + key);
    return v;
}

std::optional<Decision> parse_candidate(TaskKind kind, const std::string& item)
{
    if (kind == TaskKind::Path) {
        for (Direction d : {Direction::North, Direction::South, Direction::East, Direction::West,
                            Direction::Hover}) {
            if (item == to_string(d)) return Decision{kind, DirectionChoice{d}};
        }
        return std::nullopt;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) return std::nullopt;
    switch (kind) {
    case TaskKind::Schedule:
        if (v < 0.0 || v != std::floor(v)) return std::nullopt;
        return Decision{kind, SensorChoice{static_cast<std::size_t>(v)}};
    case TaskKind::Velocity: return Decision{kind, SpeedChoice{v}};
    default: return Decision{kind, PowerChoice{v}};
    }
}

std::optional<ParsedPrompt> read_prompt(std::string_view text)
{
    static constexpr std::string_view headers[] = {"GOAL",          "INPUT DATA", "RULES",
                                                   "EXAMPLES",      "OUTPUT FORMAT", "FEEDBACK"};
    std::map<std::string, std::vector<std::string>> sections;
    std::vector<std::string> order;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        if (line.rfind("## ", 0) == 0) {
            current = line.substr(3);
            order.push_back(current);
            continue;
        }
        if (!current.empty() && !line.empty()) sections[current].push_back(line);
    }
    if (order.size() != std::size(headers) || !std::equal(order.begin(), order.end(), headers)) {
        return std::nullopt;
    }

    try {
        ParsedPrompt out;
        TaskDescription& d = out.desc;
        const auto& input = sections["INPUT DATA"];
        if (input.empty() || sections["GOAL"].empty()) return std::nullopt;
        d.goal = sections["GOAL"].front();

        const auto head = key_values(input.front());
        const auto kind = parse_task_kind(head.count("task") ? head.at("task") : "");
        if (!kind) return std::nullopt;
        d.kind = *kind;
        StateSnapshot& s = d.snapshot;
        s.slot = to_count(head, "slot");
        s.buffer_capacity = to_count(head, "q_max");
        s.link_capacity = to_count(head, "link_capacity");
        s.slot_duration = to_real(head, "slot_duration");
        s.cruise_speed = to_real(head, "cruise_speed");
        if (head.count("target")) d.target_sensor = to_count(head, "target");

        for (std::size_t i = 1; i < input.size(); ++i) {
            const std::string& line = input[i];
            if (line.rfind("uav ", 0) == 0) {
                const auto kv = key_values(line);
                s.uav.position = {to_real(kv, "x"), to_real(kv, "y")};
                s.uav.speed = to_real(kv, "speed");
                s.uav.tx_power = to_real(kv, "power");
                s.uav.battery = to_real(kv, "battery");
            } else if (line.rfind("sensor ", 0) == 0) {
                const auto kv = key_values(line);
                SensorSnapshot v;
                v.id = to_count(kv, "id");
                v.position = {to_real(kv, "x"), to_real(kv, "y")};
                v.queue_len = to_count(kv, "queue");
                v.distance = to_real(kv, "distance");
                v.per = to_real(kv, "per");
                v.battery = to_real(kv, "battery");
                v.tx_power = to_real(kv, "power");
                v.alive = to_count(kv, "alive") != 0;
                s.sensors.push_back(v);
            } else {
                d.input_notes.push_back(line);
            }
        }
        for (const auto& rule : sections["RULES"]) {
            const std::size_t dot = rule.find(". ");
            d.rules.push_back(dot == std::string::npos ? rule : rule.substr(dot + 2));
        }

        out.space.kind = d.kind;
        for (const auto& line : sections["OUTPUT FORMAT"]) {
            if (line.rfind("Candidates: ", 0) != 0) continue;
            std::string_view rest = std::string_view(line).substr(12);
            while (!rest.empty()) {
                const std::size_t comma = std::min(rest.find(", "), rest.size());
                const std::string item(rest.substr(0, comma));
                rest.remove_prefix(std::min(rest.size(), comma + 2));
                const auto c = parse_candidate(d.kind, item);
                if (!c) return std::nullopt;
                out.space.candidates.push_back(*c);
            }
        }
        if (out.space.candidates.empty()) return std::nullopt;
        return out;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

int clause_sign(const std::vector<std::string>& rules, std::string_view normal,
                std::string_view inverted)
{
    int sign = 0;
    for (const auto& r : rules) {
        const std::string l = lower(r);
        if (l.find(inverted) != std::string::npos) return -1;
        if (l.find(normal) != std::string::npos) sign = 1;
    }
    return sign;
}

}  // namespace

std::string_view to_string(BackendKind kind)
{
    switch (kind) {
    case BackendKind::Random: return "random";
    case BackendKind::RoundRobin: return "round_robin";
    case BackendKind::MaxQueue: return "max_queue";
    case BackendKind::BestChannel: return "best_channel";
    case BackendKind::GreedyWeighted: return "greedy_weighted";
    case BackendKind::BruteForce: return "brute_force";
    case BackendKind::MockLlm: return "mock_llm";
    case BackendKind::RemoteLlm: return "remote_llm";
    }
    return "?";
}

std::optional<BackendKind> parse_backend_kind(std::string_view name)
{
    for (BackendKind k : {BackendKind::Random, BackendKind::RoundRobin, BackendKind::MaxQueue,
                          BackendKind::BestChannel, BackendKind::GreedyWeighted,
                          BackendKind::BruteForce, BackendKind::MockLlm, BackendKind::RemoteLlm}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

std::unique_ptr<DecisionBackend> make_backend(const BackendSpec& spec, TaskKind kind,
                                              std::uint64_t seed,
                                              std::shared_ptr<ChatTransport> transport)
{
    spec.weights.validate();
    switch (spec.kind) {
    case BackendKind::Random: return std::make_unique<RandomBackend>(seed);
    case BackendKind::RoundRobin: return std::make_unique<RoundRobinBackend>();
    case BackendKind::MaxQueue:
    case BackendKind::BestChannel:
        if (kind != TaskKind::Schedule) {
            throw ConfigError("backend", std::string(to_string(spec.kind)) +
                                             " only serves the schedule task");
        }
        if (spec.kind == BackendKind::MaxQueue) return std::make_unique<MaxQueueBackend>();
        return std::make_unique<BestChannelBackend>();
    case BackendKind::GreedyWeighted: return std::make_unique<GreedyWeightedBackend>(spec.weights);
    case BackendKind::BruteForce:
        if (spec.lookahead < 1) throw ConfigError("lookahead", "must be >= 1");
        return std::make_unique<BruteForceBackend>(spec.lookahead, spec.weights);
    case BackendKind::MockLlm:
        return std::make_unique<MockLlmBackend>(spec.weights, spec.system_prompt, spec.max_retries);
    case BackendKind::RemoteLlm: {
        if (spec.remote.timeout_ms <= 0) throw ConfigError("timeout_ms", "must be > 0");
        if (spec.remote.backoff_base_ms < 0) throw ConfigError("backoff_base_ms", "must be >= 0");
        if (!transport) {
            transport = std::make_shared<HttpChatTransport>(resolve_base_url(spec.remote),
                                                            api_key_from_env());
        }
        return std::make_unique<RemoteLlmBackend>(spec.weights, spec.system_prompt, spec.remote,
                                                  std::move(transport));
    }
    }
    throw ConfigError("backend", "unknown backend kind");
}

Decision greedy_weighted(const StateSnapshot& snapshot, const SchedulerWeights& weights)
{
    return {TaskKind::Schedule, SensorChoice{greedy_schedule(snapshot, weights)}};
}

Decision heuristic_decision(const TaskDescription& desc, const ActionSpace& space,
                            const SchedulerWeights& weights, bool inverted)
{
    const StateSnapshot& snap = desc.snapshot;
    const int sign = inverted ? -1 : 1;
    if (space.kind == TaskKind::Schedule) {
        return {TaskKind::Schedule, SensorChoice{greedy_schedule(snap, weights, sign, sign)}};
    }

    const std::size_t target_id = desc.target_sensor ? *desc.target_sensor
                                                     : greedy_schedule(snap, weights);
    const SensorSnapshot& target = sensor_at(snap, target_id);
    const double gap = horizontal_distance(snap.uav.position, target.position);

    switch (space.kind) {
    case TaskKind::Velocity: {
        const double ideal = gap / snap.slot_duration;
        return pick_extreme(space, inverted,
                            [&](const Decision& d) { return std::abs(level_of(d) - ideal); });
    }
    case TaskKind::Path: {
        const double step = snap.cruise_speed * snap.slot_duration;
        return pick_extreme(space, inverted, [&](const Decision& d) {
            const Direction dir = std::get<DirectionChoice>(d.value).direction;
            const Vec2 next = dir == Direction::Hover
                                  ? snap.uav.position
                                  : step_heading(snap.uav.position, dir, step,
                                                 std::numeric_limits<double>::infinity());
            return horizontal_distance(next, target.position);
        });
    }
    case TaskKind::UavPower:
    case TaskKind::SensorPower: {
        const double current =
            space.kind == TaskKind::UavPower ? snap.uav.tx_power : target.tx_power;
        std::vector<double> levels;
        for (const auto& c : space.candidates) levels.push_back(level_of(c));
        std::sort(levels.begin(), levels.end());
        std::size_t idx = 0;
        for (std::size_t i = 1; i < levels.size(); ++i) {
            if (std::abs(levels[i] - current) < std::abs(levels[idx] - current)) idx = i;
        }
        int step = 0;
        if (target.per <= 0.2) step = -1;
        if (target.per >= 0.5) step = 1;
        step *= sign;
        if (step < 0 && idx > 0) --idx;
        if (step > 0 && idx + 1 < levels.size()) ++idx;
        return {space.kind, PowerChoice{levels[idx]}};
    }
    case TaskKind::Schedule: break;
    }
    return space.candidates.front();
}

std::string mock_llm(const Prompt& prompt, const SchedulerWeights& weights)
{
    const auto parsed = read_prompt(prompt.user);
    if (!parsed) {
        return "I could not make sense of this request, so no action is given.";
    }
    const TaskDescription& desc = parsed->desc;
    const ActionSpace& space = parsed->space;

    bool worst = lower(desc.goal).find("maximize") != std::string::npos;
    for (const auto& note : desc.input_notes) {
        if (lower(note).find("ignore the rules") != std::string::npos) worst = true;
    }

    Decision choice;
    if (desc.kind == TaskKind::Schedule) {
        int queue_sign = clause_sign(desc.rules, "high queue", "low queue");
        int channel_sign = clause_sign(desc.rules, "good channel", "poor channel");
        if (queue_sign == 0 && channel_sign == 0) {
            return "The rules give no scheduling priority; no action.";
        }
        SchedulerWeights w = weights;
        if (queue_sign == 0) w.queue = 0.0;
        if (channel_sign == 0) w.channel = 0.0;
        if (worst) {
            queue_sign = -queue_sign;
            channel_sign = -channel_sign;
        }
        choice = {TaskKind::Schedule,
                  SensorChoice{greedy_schedule(desc.snapshot, w, queue_sign == 0 ? 1 : queue_sign,
                                               channel_sign == 0 ? 1 : channel_sign)}};
    } else {
        const bool inverted = clause_sign(desc.rules, "high queue", "low queue") < 0 ||
                              clause_sign(desc.rules, "good channel", "poor channel") < 0;
        choice = heuristic_decision(desc, space, weights, inverted != worst);
    }
    return fmt::format("Based on the input data and the rules, the best choice is clear.\n"
                       "ACTION: {}\n",
                       format_action(choice));
}

}  // namespace uasnet
