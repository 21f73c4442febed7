#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <json.hpp>

#include "uasnet/errors.hpp"
#include "uasnet/harness.hpp"

using namespace uasnet;
namespace fs = std::filesystem;

namespace {

class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag)
        : path_(fs::temp_directory_path() / ("uasnet-test-" + tag))
    {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~ScratchDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_field(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "";
}

ExperimentConfig small_experiment(const fs::path& out)
{
    ExperimentConfig c;
    c.name = "small";
    c.world.n_sensors = 5;
    c.horizon = 40;
    c.replications = 3;
    c.output_dir = out;
    return c;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config takes every default")
{
    const ExperimentConfig c =
        parse_config(R"({"n_sensors": 10, "task": "schedule", "backend": "greedy_weighted"})");
    const ExperimentConfig d;
    CHECK(c.world == d.world);
    CHECK(c.horizon == d.horizon);
    CHECK(c.replications == 1);
    CHECK(c.backend.kind == BackendKind::GreedyWeighted);
    CHECK(c.demonstrations == DemonstrationPolicy{});
    CHECK_FALSE(c.attack.has_value());
    CHECK(effective_config(c)["arrival_rate"] == nlohmann::json::array({2.0}));
}

TEST_CASE("full config")
{
    const ExperimentConfig c = parse_config(R"({
        "name": "probe", "task": "velocity", "n_sensors": 4, "arrival_rate": [1, 2, 3, 4],
        "backend": {"kind": "mock_llm", "w_queue": 0.7, "w_channel": 0.3, "max_retries": 1},
        "demonstrations": {"k_recent": 3, "k_best": 1, "feedback_window": 2},
        "attack": {"kind": "rule_inversion", "severity": 0.5},
        "horizon": 30, "replications": 2, "base_seed": 100
    })");
    CHECK(c.name == "probe");
    CHECK(c.task == TaskKind::Velocity);
    CHECK(c.world.arrival_rates == std::vector<double>{1, 2, 3, 4});
    CHECK(c.backend.kind == BackendKind::MockLlm);
    CHECK(c.backend.weights == SchedulerWeights{0.7, 0.3});
    CHECK(c.backend.max_retries == 1);
    CHECK(c.demonstrations.k_recent == 3);
    REQUIRE(c.attack.has_value());
    CHECK(c.attack->kind == AttackKind::RuleInversion);
    CHECK(c.attack->severity == 0.5);
    CHECK(c.base_seed == 100);
}

TEST_CASE("errors name the offending key")
{
    CHECK(error_field(R"({"n_sensor": 10, "task": "schedule", "backend": "random"})") == "n_sensor");
    CHECK(error_field(R"({"task": "schedule", "backend": "random", "horizon": 0})") == "horizon");
    CHECK(error_field(R"({"task": "schedule"})") == "backend");
    CHECK(error_field(R"({"task": "fly", "backend": "random"})") == "task");
    CHECK(error_field(R"({"task": "schedule", "backend": {"kind": "random", "speed": 1}})") ==
          "speed");
    CHECK(error_field(R"({"task": "schedule", "backend": "random", "horizon": -3})") == "horizon");
    CHECK(error_field(R"({"task": "schedule", "backend": "random", "d_ref": "far"})") == "d_ref");
    CHECK(error_field(R"({"task": "path", "backend": "max_queue"})") == "backend");
    CHECK(error_field(
              R"({"task": "schedule", "backend": "random", "attack": {"kind": "rule_inversion", "severity": 2}})") ==
          "severity");
}

TEST_CASE("file, syntax and value errors are distinct")
{
    CHECK_THROWS_AS(load_config("/nonexistent/uasnet.json"), ConfigFileError);
    CHECK_THROWS_AS(parse_config("{\"task\": "), ConfigParseError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigParseError);
    CHECK_THROWS_AS(parse_config(R"({"task": "schedule"})"), ConfigError);
}

TEST_CASE("digest follows every effective parameter and nothing else")
{
    ExperimentConfig a;
    ExperimentConfig b;
    CHECK(config_digest(a) == config_digest(b));
    b.output_dir = "elsewhere";
    b.threads = 4;
    CHECK(config_digest(a) == config_digest(b));
    b.world.d_ref = 301.0;
    CHECK(config_digest(a) != config_digest(b));
    b = a;
    b.backend.weights.queue = 0.6;
    CHECK(config_digest(a) != config_digest(b));
    b = a;
    b.horizon = 201;
    CHECK(config_digest(a) != config_digest(b));
}

}

TEST_SUITE("harness") {

TEST_CASE("replications write one CSV each plus a summary")
{
    ScratchDir dir("files");
    const ExperimentOutcome out = run_experiment(small_experiment(dir.path()));
    CHECK(out.csv_paths.size() == 3);
    std::size_t csv = 0;
    std::size_t json = 0;
    for (const auto& entry : fs::directory_iterator(dir.path())) {
        csv += entry.path().extension() == ".csv";
        json += entry.path().extension() == ".json";
    }
    CHECK(csv == 3);
    CHECK(json == 1);
    CHECK(fs::exists(dir.path() / "small_summary.json"));
    CHECK(fs::exists(dir.path() / "small_seed1.csv"));
    CHECK(fs::exists(dir.path() / "small_seed3.csv"));
    CHECK_FALSE(out.failed);
}

TEST_CASE("reruns are byte-identical")
{
    ScratchDir a("rerun-a");
    ScratchDir b("rerun-b");
    ExperimentConfig cfg = small_experiment(a.path());
    cfg.backend.kind = BackendKind::Random;
    const ExperimentOutcome first = run_experiment(cfg);
    cfg.output_dir = b.path();
    cfg.threads = 3;
    const ExperimentOutcome second = run_experiment(cfg);
    REQUIRE(first.csv_paths.size() == second.csv_paths.size());
    for (std::size_t i = 0; i < first.csv_paths.size(); ++i) {
        CHECK(slurp(first.csv_paths[i]) == slurp(second.csv_paths[i]));
    }
}

TEST_CASE("CSV columns add up to the summary")
{
    ScratchDir dir("sums");
    ExperimentConfig cfg = small_experiment(dir.path());
    cfg.task = TaskKind::SensorPower;
    const ExperimentOutcome out = run_experiment(cfg);
    const auto& episodes = out.summary["cells"][0]["episodes"];
    REQUIRE(episodes.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        std::istringstream in(slurp(out.csv_paths[i]));
        std::string line;
        std::getline(in, line);
        CHECK(line.rfind("# uasnet-episode-csv/1", 0) == 0);
        std::getline(in, line);
        CHECK(line == kCsvHeader);
        std::uint64_t overflow = 0, channel = 0, delivered = 0, rows = 0;
        double cost = 0.0;
        while (std::getline(in, line)) {
            std::vector<std::string> f;
            std::stringstream ls(line);
            for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
            REQUIRE(f.size() == 9);
            overflow += std::stoull(f[2]);
            channel += std::stoull(f[3]);
            delivered += std::stoull(f[4]);
            cost += std::stod(f[6]);
            ++rows;
        }
        const auto& e = episodes[i];
        CHECK(rows == e["slots"].get<std::uint64_t>());
        CHECK(overflow == e["overflow_loss"].get<std::uint64_t>());
        CHECK(channel == e["channel_loss"].get<std::uint64_t>());
        CHECK(delivered == e["delivered"].get<std::uint64_t>());
        CHECK(cost == e["cumulative_cost"].get<double>());
    }
}

TEST_CASE("replications do not depend on each other")
{
    ExperimentConfig cfg;
    cfg.horizon = 30;
    cfg.replications = 4;
    cfg.backend.kind = BackendKind::Random;
    const EpisodeMetrics alone = run_replication(cfg, 2);
    ScratchDir dir("indep");
    cfg.output_dir = dir.path();
    const ExperimentOutcome out = run_experiment(cfg);
    CHECK(out.summary["cells"][0]["episodes"][2]["cumulative_cost"].get<double>() ==
          alone.totals.cost);
}

TEST_CASE("cell statistics")
{
    const CellStats s = cell_stats({4.0, 1.0, 3.0, 2.0});
    CHECK(s.median == 2.5);
    CHECK(s.mean == 2.5);
    CHECK(s.q1 == 1.75);
    CHECK(s.q3 == 3.25);
    CHECK(s.iqr == 1.5);
    CHECK(cell_stats({7.0}).median == 7.0);
}

TEST_CASE("sign test")
{
    CHECK(sign_test_p_value(0, 0) == 1.0);
    CHECK(sign_test_p_value(5, 10) == 1.0);
    // 2 * (1/2)^10 for a clean sweep of ten pairs.
    CHECK(sign_test_p_value(10, 10) == doctest::Approx(2.0 / 1024.0));
}

TEST_CASE("compare")
{
    ScratchDir dir("compare");
    ExperimentConfig cfg = small_experiment(dir.path());
    cfg.sweep = SweepSpec{SweepVariable::NSensors, {3, 5}};
    const ExperimentOutcome greedy = run_experiment(cfg);

    const nlohmann::json self = compare(greedy.summary, greedy.summary);
    REQUIRE(self["cells"].size() == 2);
    for (const auto& c : self["cells"]) CHECK(c["ratio"].get<double>() == 1.0);
    CHECK(compare_table(self).find("ratio") != std::string::npos);

    cfg.name = "heavy";
    cfg.world.arrival_rates = {4.0};
    const ExperimentOutcome heavy = run_experiment(cfg);
    const nlohmann::json vs = compare(greedy.summary, heavy.summary);
    for (const auto& c : vs["cells"]) {
        CHECK(c["ratio"].get<double>() < 1.0);
        CHECK(c["a_lower"].get<int>() == 3);
    }
    cfg.world.arrival_rates = {2.0};

    cfg.name = "other";
    cfg.sweep = SweepSpec{SweepVariable::NSensors, {3, 6}};
    const ExperimentOutcome shifted = run_experiment(cfg);
    CHECK_THROWS_AS(compare(greedy.summary, shifted.summary), MetricError);
    cfg.sweep.reset();
    const ExperimentOutcome flat = run_experiment(cfg);
    CHECK_THROWS_AS(compare(greedy.summary, flat.summary), MetricError);
}

}
