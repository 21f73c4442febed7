#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "uasnet/adversary.hpp"
#include "uasnet/backends.hpp"
#include "uasnet/context.hpp"
#include "uasnet/episode.hpp"
#include "uasnet/tasks.hpp"
#include "uasnet/world.hpp"

namespace uasnet {

inline constexpr std::string_view kCsvSchema = "uasnet-episode-csv/1";
inline constexpr std::string_view kSummarySchema = "uasnet-summary/1";
inline constexpr std::string_view kCompareSchema = "uasnet-compare/1";
inline constexpr std::string_view kCsvHeader =
    "slot,action,overflow_loss,channel_loss,delivered,energy_mJ,scalar_cost,fallback_used,"
    "attack_applied";

class ConfigFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SweepVariable { NSensors, Severity };

struct SweepSpec {
    SweepVariable variable = SweepVariable::NSensors;
    std::vector<double> values;
};

struct ExperimentConfig {
    std::string name = "experiment";
    WorldConfig world;
    TaskKind task = TaskKind::Schedule;
    BackendSpec backend;
    DemonstrationPolicy demonstrations;
    std::optional<AttackSpec> attack;
    std::size_t horizon = 200;
    std::size_t replications = 1;
    std::uint64_t base_seed = 1;
    std::filesystem::path output_dir = "runs";
    std::optional<SweepSpec> sweep;
    std::size_t threads = 1;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

// Parses and validates a JSON config document. Unknown keys are rejected.
// Throws ConfigParseError for malformed JSON, ConfigError for bad values.
ExperimentConfig parse_config(const std::string& text);
// Adds ConfigFileError for a missing or unreadable file.
ExperimentConfig load_config(const std::filesystem::path& path);

// Every effective parameter, defaults included. output_dir and threads are
// left out: they do not change results.
nlohmann::json effective_config(const ExperimentConfig& config);
std::string config_digest(const ExperimentConfig& config);

std::string sweep_variable_name(SweepVariable v);

// Single episode with seed base_seed + replication.
EpisodeMetrics run_replication(const ExperimentConfig& cell, std::size_t replication,
                               std::shared_ptr<ChatTransport> transport = nullptr);

std::string episode_csv(const EpisodeMetrics& metrics);

struct CellStats {
    double median = 0.0;
    double mean = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    std::size_t n = 0;
};

CellStats cell_stats(std::vector<double> costs);

struct ExperimentOutcome {
    nlohmann::json summary;
    std::filesystem::path summary_path;
    std::vector<std::filesystem::path> csv_paths;
    bool failed = false;  // some cell lost every replication
};

// Runs every cell (one without a sweep) for all replications, writes one CSV
// per episode and a summary JSON into output_dir.
ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 std::shared_ptr<ChatTransport> transport = nullptr);

// Per-cell ratio of medians (a / b) and a paired sign test over
// replications. Throws MetricError when the sweep axes differ.
nlohmann::json compare(const nlohmann::json& summary_a, const nlohmann::json& summary_b);
std::string compare_table(const nlohmann::json& report);

// Two-sided sign test p-value for `wins` successes out of `trials`.
double sign_test_p_value(std::size_t wins, std::size_t trials);

}  // namespace uasnet
