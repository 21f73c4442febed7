// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "uasnet/backends.hpp"
#include "uasnet/context.hpp"
#include "uasnet/episode.hpp"
#include "uasnet/harness.hpp"
#include "uasnet/oracle.hpp"
#include "uasnet/stub_server.hpp"

using namespace uasnet;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kConservationBudgetS = 30.0;
constexpr double kOracleBudgetS = 10.0;
constexpr double kBaselineBudgetS = 120.0;
constexpr double kScalingBudgetS = 180.0;
constexpr double kAttackBudgetS = 120.0;
constexpr double kMockBudgetS = 60.0;
constexpr double kProtocolBudgetS = 30.0;
constexpr double kDeterminismBudgetS = 30.0;
constexpr double kChannelBudgetS = 10.0;

constexpr double kRandomRatioLimit = 0.7;
constexpr double kRuleInversionMin = 1.2;
constexpr double kGoalSubstitutionMin = 1.5;
constexpr double kDeadlineSlack = 0.10;
constexpr double kDeliveredLo = 0.49;
constexpr double kDeliveredHi = 0.51;

struct Verdict {
    bool pass = false;
    std::string detail;
};

class Lcg {
public:
    explicit Lcg(std::uint64_t seed) : s_(seed ^ 0x9e3779b97f4a7c15ULL) {}
    std::uint64_t next()
    {
        s_ = s_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return s_ >> 11;
    }
    double unit() { return static_cast<double>(next() >> 1) / static_cast<double>(1ULL << 52); }
    double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }

private:
    std::uint64_t s_;
};

double median(std::vector<double> v) { return cell_stats(std::move(v)).median; }

std::vector<double> episode_costs(ExperimentConfig cfg, std::size_t replications)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < replications; ++i) out.push_back(run_replication(cfg, i).totals.cost);
    return out;
}

Verdict conservation()
{
    Lcg gen(1);
    const BackendKind backends[] = {BackendKind::Random, BackendKind::RoundRobin,
                                    BackendKind::GreedyWeighted, BackendKind::MockLlm};
    const TaskKind tasks[] = {TaskKind::Schedule, TaskKind::Velocity, TaskKind::Path,
                              TaskKind::UavPower, TaskKind::SensorPower};
    std::size_t violations = 0;
    for (int run = 0; run < 100; ++run) {
        WorldConfig cfg;
        cfg.n_sensors = 1 + gen.below(20);
        cfg.arrival_rates = {gen.range(0.0, 5.0)};
        cfg.buffer_capacity = 10 + gen.below(60);
        cfg.link_capacity = 1 + gen.below(20);
        cfg.sensor_battery_init = gen.range(50.0, 5000.0);
        cfg.rng_seed = gen.next();
        WorldState w = init_world(cfg);
        BackendSpec spec;
        spec.kind = backends[gen.below(4)];
        const TaskKind task = tasks[gen.below(5)];
        auto backend = make_backend(spec, task, cfg.rng_seed);
        EpisodeOptions opts;
        opts.kind = task;
        opts.horizon = 200;
        const EpisodeMetrics m = run_episode(w, *backend, opts);
        const PacketTotals& t = w.totals;
        const bool ok = t.arrivals == t.delivered + t.overflow_loss + t.channel_loss + w.queued_packets() &&
                        m.totals.arrivals == t.arrivals && m.totals.delivered == t.delivered;
        violations += ok ? 0 : 1;
    }
    return {violations == 0, fmt::format("{} of 100 episodes violate the packet balance", violations)};
}

// Random state where one sensor has the strictly longest queue and the
// strictly best reported channel; every queue fills at least one link load
// and all radios share one power level.
WorldState dominated_state(Lcg& gen)
{
    for (;;) {
        WorldConfig cfg;
        cfg.n_sensors = 1 + gen.below(5);
        cfg.arrival_rates = {gen.range(0.0, 5.0)};
        cfg.rng_seed = gen.next();
        WorldState w = init_world(cfg);
        const double power = cfg.power_levels[gen.below(cfg.power_levels.size())];
        w.uav.tx_power = power;
        for (auto& s : w.sensors) s.tx_power = power;
        w.uav.position = {gen.range(0.0, cfg.area_side), gen.range(0.0, cfg.area_side)};
        w.uav.speed = cfg.speed_levels[gen.below(cfg.speed_levels.size())];

        const StateSnapshot snap = take_snapshot(w);
        std::size_t best = 0;
        for (std::size_t i = 1; i < snap.sensors.size(); ++i) {
            if (snap.sensors[i].per < snap.sensors[best].per) best = i;
        }
        bool unique = true;
        for (std::size_t i = 0; i < snap.sensors.size(); ++i) {
            if (i != best && snap.sensors[i].per <= snap.sensors[best].per) unique = false;
        }
        if (!unique) continue;

        const std::uint64_t c = cfg.link_capacity;
        const std::uint64_t cap = cfg.buffer_capacity;
        std::uint64_t top = c;
        for (std::size_t i = 0; i < w.sensors.size(); ++i) {
            if (i == best) continue;
            w.sensors[i].queue_len = c + gen.below(cap - c);
            top = std::max(top, w.sensors[i].queue_len);
        }
        w.sensors[best].queue_len =
            w.sensors.size() == 1 ? c + gen.below(cap - c + 1) : top + 1 + gen.below(cap - top);
        return w;
    }
}

Verdict oracle_equivalence()
{
    Lcg gen(2);
    std::size_t agree = 0;
    constexpr std::size_t kCases = 1000;
    for (std::size_t k = 0; k < kCases; ++k) {
        const WorldState w = dominated_state(gen);
        const Decision oracle = brute_force(w, TaskKind::Schedule, 1);
        const Decision greedy = greedy_weighted(take_snapshot(w), {});
        agree += oracle == greedy ? 1 : 0;
    }
    return {agree == kCases, fmt::format("{}/{} dominated snapshots agree", agree, kCases)};
}

Verdict baseline_ordering()
{
    ExperimentConfig cfg;
    cfg.horizon = 500;
    auto med = [&](BackendKind k) {
        ExperimentConfig c = cfg;
        c.backend.kind = k;
        return median(episode_costs(c, 20));
    };
    const double greedy = med(BackendKind::GreedyWeighted);
    const double max_queue = med(BackendKind::MaxQueue);
    const double best_channel = med(BackendKind::BestChannel);
    const double random = med(BackendKind::Random);
    const bool ok = greedy < max_queue && greedy < best_channel && greedy <= kRandomRatioLimit * random;
    return {ok, fmt::format("medians greedy={} max_queue={} best_channel={} random={}; "
                            "greedy/random={:.3f} (limit {})",
                            greedy, max_queue, best_channel, random, greedy / random,
                            kRandomRatioLimit)};
}

Verdict cost_grows_with_sensors()
{
    std::vector<double> medians;
    for (std::size_t n : {5u, 10u, 20u}) {
        ExperimentConfig cfg;
        cfg.horizon = 500;
        cfg.world.n_sensors = n;
        medians.push_back(median(episode_costs(cfg, 20)));
    }
    const bool ok = medians[0] < medians[1] && medians[1] < medians[2];
    return {ok, fmt::format("median cost N=5:{} N=10:{} N=20:{}", medians[0], medians[1], medians[2])};
}

Verdict attack_degradation()
{
    auto median_ratio = [](AttackKind kind) {
        ExperimentConfig base;
        base.backend.kind = BackendKind::MockLlm;
        ExperimentConfig normal = base;
        normal.attack = AttackSpec{kind, 0.0};
        ExperimentConfig attacked = base;
        attacked.attack = AttackSpec{kind, 1.0};
        std::vector<double> ratios;
        for (std::size_t i = 0; i < 20; ++i) {
            ratios.push_back(
                degradation_ratio(run_replication(normal, i), run_replication(attacked, i)).ratio);
        }
        return median(ratios);
    };
    const double inversion = median_ratio(AttackKind::RuleInversion);
    const double goal = median_ratio(AttackKind::GoalSubstitution);
    const bool ok = inversion >= kRuleInversionMin && goal >= kGoalSubstitutionMin;
    return {ok, fmt::format("median degradation rule_inversion={:.3f} (>= {}) "
                            "goal_substitution={:.3f} (>= {})",
                            inversion, kRuleInversionMin, goal, kGoalSubstitutionMin)};
}

Verdict mock_matches_greedy()
{
    std::size_t identical = 0;
    for (std::size_t i = 0; i < 20; ++i) {
        ExperimentConfig g;
        ExperimentConfig m;
        m.backend.kind = BackendKind::MockLlm;
        const EpisodeMetrics a = run_replication(g, i);
        const EpisodeMetrics b = run_replication(m, i);
        identical += a.decisions == b.decisions && a.rows.size() == 200 && b.totals.fallbacks == 0;
    }
    return {identical == 20, fmt::format("{}/20 seeds give identical decision sequences", identical)};
}

Verdict protocol()
{
    const WorldState w = init_world({});
    const TaskDescription d = build_task_description(TaskKind::Schedule, w, {}, {});
    const ActionSpace space = action_space(TaskKind::Schedule, w);
    auto backend_for = [](const StubServer& s, int timeout_ms) {
        BackendSpec spec;
        spec.kind = BackendKind::RemoteLlm;
        spec.remote.base_url = s.base_url();
        spec.remote.max_retries = 2;
        spec.remote.timeout_ms = timeout_ms;
        return make_backend(spec, TaskKind::Schedule, 1);
    };

    StubServer valid({StubScenario::Mode::Sequence, {{200, "Serving the fullest queue.\nACTION: sensor=6", 0}}});
    valid.start();
    const BackendResponse ra = backend_for(valid, 2000)->decide({d, space, w});
    const bool a = ra.decision == Decision{TaskKind::Schedule, SensorChoice{6}} && !ra.fallback_used;

    StubServer invalid({StubScenario::Mode::Sequence, {{200, "ACTION: sensor=99", 0}}});
    invalid.start();
    const BackendResponse rb = backend_for(invalid, 2000)->decide({d, space, w});
    const bool b = rb.fallback_used && invalid.request_count() == 3;

    constexpr int kTimeoutMs = 200;
    StubServer slow({StubScenario::Mode::Sequence, {{200, "ACTION: sensor=1", 1500}}});
    slow.start();
    const auto start = std::chrono::steady_clock::now();
    const BackendResponse rc = backend_for(slow, kTimeoutMs)->decide({d, space, w});
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const double bound = 3.0 * kTimeoutMs;
    const bool c = rc.fallback_used && ms <= bound * (1.0 + kDeadlineSlack);

    return {a && b && c,
            fmt::format("(a) parsed={} (b) fallback={} calls={} (c) {:.0f} ms vs bound {:.0f} ms", a,
                        rb.fallback_used, invalid.request_count(), ms, bound)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict determinism()
{
    const fs::path root = fs::temp_directory_path() / "uasnet-acceptance-determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    const fs::path config = root / "config.json";
    std::ofstream(config) << R"({"name": "det", "n_sensors": 10, "task": "schedule",
  "backend": "random", "horizon": 200, "replications": 3, "base_seed": 11})";

    std::vector<std::string> runs;
    for (const char* tag : {"a", "b"}) {
        const fs::path out = root / tag;
        const std::string cmd = fmt::format("\"{}\" run \"{}\" --out \"{}\" > \"{}\" 2>&1",
                                            UASNET_CLI_PATH, config.string(), out.string(),
                                            (root / (std::string(tag) + ".log")).string());
        if (std::system(cmd.c_str()) != 0) {
            return {false, "CLI run failed: " + slurp(root / (std::string(tag) + ".log"))};
        }
        std::string all;
        for (int seed : {11, 12, 13}) all += slurp(out / fmt::format("det_seed{}.csv", seed));
        runs.push_back(all);
    }
    const bool ok = !runs[0].empty() && runs[0] == runs[1];
    fs::remove_all(root);
    return {ok, fmt::format("3 CSVs per run, {} bytes, identical={}", runs[0].size(), runs[0] == runs[1])};
}

Verdict channel_sanity()
{
    WorldConfig cfg;
    cfg.n_sensors = 1;
    cfg.uav_altitude = cfg.d_ref * std::sqrt(std::log(2.0));
    WorldState w = init_world(cfg);
    w.sensors[0].position = w.uav.position;
    std::uint64_t delivered = 0;
    std::uint64_t sent = 0;
    while (sent < 10000) {
        w.sensors[0].queue_len = cfg.link_capacity;
        w.sensors[0].battery = cfg.sensor_battery_init;
        const TransmitOutcome t = transmit(w, 0);
        delivered += t.delivered;
        sent += t.delivered + t.lost;
    }
    const double fraction = static_cast<double>(delivered) / static_cast<double>(sent);
    const bool fraction_ok = fraction >= kDeliveredLo && fraction <= kDeliveredHi;

    std::size_t breaks = 0;
    const double powers[] = {10.0, 50.0, 100.0};
    auto per = [&](int i, int j, int k) {
        return packet_error_rate(i * 50.0, j * (cfg.v_max / 19.0), powers[k], cfg);
    };
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            for (int k = 0; k < 3; ++k) {
                const double p = per(i, j, k);
                if (!(p >= 0.0 && p <= 1.0)) ++breaks;
                if (i > 0 && p < per(i - 1, j, k)) ++breaks;
                if (j > 0 && p < per(i, j - 1, k)) ++breaks;
                if (k > 0 && p > per(i, j, k - 1)) ++breaks;
            }
        }
    }
    return {fraction_ok && breaks == 0,
            fmt::format("delivered fraction {:.4f} over {} packets; {} monotonicity breaks on 20x20x3",
                        fraction, sent, breaks)};
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria = {
        {"1 conservation", kConservationBudgetS, conservation},
        {"2 oracle equivalence", kOracleBudgetS, oracle_equivalence},
        {"3 baseline ordering", kBaselineBudgetS, baseline_ordering},
        {"4 cost vs sensor count", kScalingBudgetS, cost_grows_with_sensors},
        {"5 attack degradation", kAttackBudgetS, attack_degradation},
        {"6 closed-loop equivalence", kMockBudgetS, mock_matches_greedy},
        {"7 protocol conformance", kProtocolBudgetS, protocol},
        {"8 determinism", kDeterminismBudgetS, determinism},
        {"9 channel sanity", kChannelBudgetS, channel_sanity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_s;
        const bool pass = v.pass && in_time;
        failures += pass ? 0 : 1;
        std::cout << fmt::format("[{}] criterion {}: {} ({:.1f} s, budget {:.0f} s{})\n",
                                 pass ? "PASS" : "FAIL", c.name, v.detail, secs, c.budget_s,
                                 in_time ? "" : ", over budget")
                  << std::flush;
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
