#include "uasnet/adversary.hpp"

#include <algorithm>
#include <cctype>

#include "uasnet/errors.hpp"

namespace uasnet {

namespace {

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string match_case(std::string_view replacement, std::string_view original)
{
    std::string out(replacement);
    const auto upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
    if (original.size() > 1 && std::all_of(original.begin(), original.end(), upper)) {
        for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return out;
    }
    if (!original.empty() && upper(original.front())) {
        out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
    }
    return out;
}

}  // namespace

std::string_view to_string(AttackKind kind)
{
    switch (kind) {
    case AttackKind::GoalSubstitution: return "goal_substitution";
    case AttackKind::RuleInversion: return "rule_inversion";
    case AttackKind::DemoPoisoning: return "demo_poisoning";
    case AttackKind::InjectedOverride: return "injected_override";
    }
    return "?";
}

std::optional<AttackKind> parse_attack_kind(std::string_view name)
{
    for (AttackKind k : {AttackKind::GoalSubstitution, AttackKind::RuleInversion,
                         AttackKind::DemoPoisoning, AttackKind::InjectedOverride}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

void AttackSpec::validate() const
{
    if (!(severity >= 0.0 && severity <= 1.0)) {
        throw ConfigError("severity", "must lie in [0, 1]");
    }
}

std::string invert_rule(std::string_view rule)
{
    std::string out;
    out.reserve(rule.size());
    std::size_t i = 0;
    while (i < rule.size()) {
        if (!is_word_char(rule[i])) {
            out += rule[i++];
            continue;
        }
        std::size_t j = i;
        while (j < rule.size() && is_word_char(rule[j])) ++j;
        const std::string_view word = rule.substr(i, j - i);
        std::string low(word);
        for (auto& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (low == "high") {
            out += match_case("low", word);
        } else if (low == "low") {
            out += match_case("high", word);
        } else if (low == "good") {
            out += match_case("poor", word);
        } else if (low == "poor") {
            out += match_case("good", word);
        } else {
            out += word;
        }
        i = j;
    }
    return out;
}

std::string invert_goal(std::string_view goal)
{
    std::string out(goal);
    bool replaced = false;
    for (const auto& [from, to] : {std::pair{"Minimize", "Maximize"}, std::pair{"minimize", "maximize"}}) {
        std::size_t pos = 0;
        while ((pos = out.find(from, pos)) != std::string::npos) {
            out.replace(pos, 8, to);
            pos += 8;
            replaced = true;
        }
    }
    if (!replaced) out = "Maximize network cost. " + out;
    return out;
}

AttackOutcome apply_attack(const TaskDescription& desc, const AttackSpec& spec, RngStream& rng)
{
    AttackOutcome out{desc, false};
    if (!rng.bernoulli(spec.severity)) return out;
    out.applied = true;
    TaskDescription& d = out.desc;
    switch (spec.kind) {
    case AttackKind::GoalSubstitution:
        d.goal = invert_goal(d.goal);
        break;
    case AttackKind::RuleInversion:
        for (auto& rule : d.rules) rule = invert_rule(rule);
        break;
    case AttackKind::DemoPoisoning:
        for (auto& demo : d.demonstrations) {
            if (demo.space.candidates.empty()) continue;
            demo.action = demo.space.candidates[rng.uniform_index(demo.space.candidates.size())];
        }
        break;
    case AttackKind::InjectedOverride:
        d.input_notes.emplace_back(kOverrideNote);
        break;
    }
    return out;
}

}  // namespace uasnet
