#include "uasnet/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "uasnet/errors.hpp"

namespace uasnet {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError(key, "unknown key" + (where.empty() ? "" : " in " + where));
        }
    }
}

template <class T>
T get_as(const json& obj, const std::string& key, const std::string& field)
{
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(field, "has the wrong type");
    }
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& field)
{
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        throw ConfigError(field, "must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

template <class T>
void read_opt(const json& obj, const std::string& key, T& out, const std::string& field = "")
{
    if (!obj.contains(key)) return;
    const std::string name = field.empty() ? key : field;
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
        out = static_cast<T>(get_count(obj, key, name));
    } else if constexpr (std::is_same_v<T, double>) {
        if (!obj.at(key).is_number()) throw ConfigError(name, "must be a number");
        out = obj.at(key).get<double>();
    } else {
        out = get_as<T>(obj, key, name);
    }
}

std::vector<double> read_numbers(const json& v, const std::string& field)
{
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
        return out;
    }
    if (!v.is_array()) throw ConfigError(field, "must be a number or a list of numbers");
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError(field, "must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

BackendSpec read_backend(const json& v)
{
    BackendSpec spec;
    if (v.is_string()) {
        const auto kind = parse_backend_kind(v.get<std::string>());
        if (!kind) throw ConfigError("backend", "unknown backend '" + v.get<std::string>() + "'");
        spec.kind = *kind;
        return spec;
    }
    if (!v.is_object()) throw ConfigError("backend", "must be a name or an object");
    reject_unknown(v,
                   {"kind", "w_queue", "w_channel", "lookahead", "max_retries", "base_url", "model",
                    "temperature", "timeout_ms", "backoff_base_ms", "system_prompt"},
                   "backend");
    if (!v.contains("kind")) throw ConfigError("backend.kind", "is required");
    const auto kind = parse_backend_kind(get_as<std::string>(v, "kind", "backend.kind"));
    if (!kind) throw ConfigError("backend.kind", "unknown backend '" + v["kind"].dump() + "'");
    spec.kind = *kind;
    read_opt(v, "w_queue", spec.weights.queue, "backend.w_queue");
    read_opt(v, "w_channel", spec.weights.channel, "backend.w_channel");
    read_opt(v, "lookahead", spec.lookahead, "backend.lookahead");
    std::size_t retries = spec.kind == BackendKind::RemoteLlm ? spec.remote.max_retries
                                                              : spec.max_retries;
    read_opt(v, "max_retries", retries, "backend.max_retries");
    spec.max_retries = spec.kind == BackendKind::RemoteLlm ? 0 : retries;
    spec.remote.max_retries = retries;
    read_opt(v, "base_url", spec.remote.base_url, "backend.base_url");
    read_opt(v, "model", spec.remote.model, "backend.model");
    read_opt(v, "temperature", spec.remote.temperature, "backend.temperature");
    read_opt(v, "timeout_ms", spec.remote.timeout_ms, "backend.timeout_ms");
    read_opt(v, "backoff_base_ms", spec.remote.backoff_base_ms, "backend.backoff_base_ms");
    read_opt(v, "system_prompt", spec.system_prompt, "backend.system_prompt");
    return spec;
}

std::string cell_label(const ExperimentConfig& cfg, std::optional<double> value)
{
    if (!cfg.sweep || !value) return "";
    return fmt::format("_{}{}", sweep_variable_name(cfg.sweep->variable), format_number(*value));
}

ExperimentConfig apply_sweep_value(ExperimentConfig cfg, double value)
{
    if (cfg.sweep->variable == SweepVariable::NSensors) {
        cfg.world.n_sensors = static_cast<std::size_t>(value);
    } else {
        cfg.attack->severity = value;
    }
    cfg.sweep.reset();
    return cfg;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigFileError("cannot write " + path.string());
    out << text;
}

json episode_json(const EpisodeMetrics& m, const fs::path& csv)
{
    return {
        {"seed", m.seed},
        {"csv", csv.filename().string()},
        {"complete", m.complete},
        {"terminated_early", m.terminated_early},
        {"failure", m.failure},
        {"slots", m.rows.size()},
        {"cumulative_cost", m.totals.cost},
        {"overflow_loss", m.totals.overflow_loss},
        {"channel_loss", m.totals.channel_loss},
        {"delivered", m.totals.delivered},
        {"arrivals", m.totals.arrivals},
        {"energy_mJ", m.totals.energy_mj},
        {"energy_efficiency", m.totals.energy_efficiency()},
        {"fallbacks", m.totals.fallbacks},
        {"attacks", m.totals.attacks},
        {"wall_clock_s", m.wall_clock_s},
    };
}

double quantile_sorted(const std::vector<double>& v, double q)
{
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

std::string sweep_variable_name(SweepVariable v)
{
    return v == SweepVariable::NSensors ? "n_sensors" : "severity";
}

void ExperimentConfig::validate() const
{
    world.validate();
    backend.weights.validate();
    if (horizon < 1) throw ConfigError("horizon", "must be >= 1");
    if (replications < 1) throw ConfigError("replications", "must be >= 1");
    if (threads < 1) throw ConfigError("threads", "must be >= 1");
    if (backend.kind == BackendKind::BruteForce && backend.lookahead < 1) {
        throw ConfigError("backend.lookahead", "must be >= 1");
    }
    if (backend.kind == BackendKind::RemoteLlm && backend.remote.timeout_ms <= 0) {
        throw ConfigError("backend.timeout_ms", "must be > 0");
    }
    if ((backend.kind == BackendKind::MaxQueue || backend.kind == BackendKind::BestChannel) &&
        task != TaskKind::Schedule) {
        throw ConfigError("backend", std::string(to_string(backend.kind)) +
                                         " only serves the schedule task");
    }
    if (attack) attack->validate();
    if (sweep) {
        if (sweep->values.empty()) throw ConfigError("sweep.values", "must not be empty");
        for (double v : sweep->values) {
            if (sweep->variable == SweepVariable::NSensors) {
                if (v < 1 || v != std::floor(v)) {
                    throw ConfigError("sweep.values", "n_sensors values must be integers >= 1");
                }
                if (world.arrival_rates.size() != 1) {
                    throw ConfigError("arrival_rate", "per-sensor rates cannot be swept over n_sensors");
                }
            } else {
                if (!attack) throw ConfigError("sweep.variable", "severity sweep needs an attack");
                if (v < 0.0 || v > 1.0) throw ConfigError("sweep.values", "severity must lie in [0, 1]");
            }
        }
    }
}

ExperimentConfig parse_config(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigParseError(std::string("malformed config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigParseError("malformed config: top level must be an object");

    reject_unknown(doc,
                   {"schema_version", "name", "task", "backend", "n_sensors", "area_side",
                    "uav_altitude", "slot_duration", "buffer_capacity", "arrival_rate",
                    "link_capacity", "d_ref", "v_max", "velocity_penalty", "speed_levels",
                    "cruise_speed", "power_levels", "reference_power", "packet_air_time",
                    "sensor_battery_init", "uav_battery_init", "energy_weight", "horizon",
                    "replications", "base_seed", "output_dir", "demonstrations", "attack",
                    "sweep", "threads"},
                   "");

    ExperimentConfig cfg;
    if (doc.contains("schema_version") && doc["schema_version"] != 1) {
        throw ConfigError("schema_version", "only version 1 is supported");
    }
    read_opt(doc, "name", cfg.name);
    if (!doc.contains("task")) throw ConfigError("task", "is required");
    const auto task = parse_task_kind(get_as<std::string>(doc, "task", "task"));
    if (!task) throw ConfigError("task", "unknown task " + doc["task"].dump());
    cfg.task = *task;
    if (!doc.contains("backend")) throw ConfigError("backend", "is required");
    cfg.backend = read_backend(doc["backend"]);

    WorldConfig& w = cfg.world;
    read_opt(doc, "n_sensors", w.n_sensors);
    read_opt(doc, "area_side", w.area_side);
    read_opt(doc, "uav_altitude", w.uav_altitude);
    read_opt(doc, "slot_duration", w.slot_duration);
    read_opt(doc, "buffer_capacity", w.buffer_capacity);
    if (doc.contains("arrival_rate")) w.arrival_rates = read_numbers(doc["arrival_rate"], "arrival_rate");
    read_opt(doc, "link_capacity", w.link_capacity);
    read_opt(doc, "d_ref", w.d_ref);
    read_opt(doc, "v_max", w.v_max);
    read_opt(doc, "velocity_penalty", w.velocity_penalty);
    if (doc.contains("speed_levels")) w.speed_levels = read_numbers(doc["speed_levels"], "speed_levels");
    read_opt(doc, "cruise_speed", w.cruise_speed);
    if (doc.contains("power_levels")) w.power_levels = read_numbers(doc["power_levels"], "power_levels");
    read_opt(doc, "reference_power", w.reference_power);
    read_opt(doc, "packet_air_time", w.packet_air_time);
    read_opt(doc, "sensor_battery_init", w.sensor_battery_init);
    read_opt(doc, "uav_battery_init", w.uav_battery_init);
    read_opt(doc, "energy_weight", w.energy_weight);

    read_opt(doc, "horizon", cfg.horizon);
    read_opt(doc, "replications", cfg.replications);
    read_opt(doc, "base_seed", cfg.base_seed);
    read_opt(doc, "threads", cfg.threads);
    if (doc.contains("output_dir")) cfg.output_dir = get_as<std::string>(doc, "output_dir", "output_dir");

    if (doc.contains("demonstrations")) {
        const json& d = doc["demonstrations"];
        if (!d.is_object()) throw ConfigError("demonstrations", "must be an object");
        reject_unknown(d, {"k_recent", "k_best", "feedback_window"}, "demonstrations");
        read_opt(d, "k_recent", cfg.demonstrations.k_recent, "demonstrations.k_recent");
        read_opt(d, "k_best", cfg.demonstrations.k_best, "demonstrations.k_best");
        read_opt(d, "feedback_window", cfg.demonstrations.feedback_window,
                 "demonstrations.feedback_window");
    }
    if (doc.contains("attack") && !doc["attack"].is_null()) {
        const json& a = doc["attack"];
        if (!a.is_object()) throw ConfigError("attack", "must be an object");
        reject_unknown(a, {"kind", "severity"}, "attack");
        AttackSpec spec;
        if (!a.contains("kind")) throw ConfigError("attack.kind", "is required");
        const auto kind = parse_attack_kind(get_as<std::string>(a, "kind", "attack.kind"));
        if (!kind) throw ConfigError("attack.kind", "unknown attack " + a["kind"].dump());
        spec.kind = *kind;
        read_opt(a, "severity", spec.severity, "attack.severity");
        cfg.attack = spec;
    }
    if (doc.contains("sweep") && !doc["sweep"].is_null()) {
        const json& s = doc["sweep"];
        if (!s.is_object()) throw ConfigError("sweep", "must be an object");
        reject_unknown(s, {"variable", "values"}, "sweep");
        SweepSpec spec;
        const std::string var = s.contains("variable")
                                    ? get_as<std::string>(s, "variable", "sweep.variable")
                                    : "";
        if (var == "n_sensors") {
            spec.variable = SweepVariable::NSensors;
        } else if (var == "severity") {
            spec.variable = SweepVariable::Severity;
        } else {
            throw ConfigError("sweep.variable", "must be n_sensors or severity");
        }
        if (!s.contains("values")) throw ConfigError("sweep.values", "is required");
        spec.values = read_numbers(s["values"], "sweep.values");
        cfg.sweep = spec;
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigFileError("cannot open config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json effective_config(const ExperimentConfig& c)
{
    const WorldConfig& w = c.world;
    json doc = {
        {"schema_version", 1},
        {"name", c.name},
        {"task", std::string(to_string(c.task))},
        {"n_sensors", w.n_sensors},
        {"area_side", w.area_side},
        {"uav_altitude", w.uav_altitude},
        {"slot_duration", w.slot_duration},
        {"buffer_capacity", w.buffer_capacity},
        {"arrival_rate", w.arrival_rates},
        {"link_capacity", w.link_capacity},
        {"d_ref", w.d_ref},
        {"v_max", w.v_max},
        {"velocity_penalty", w.velocity_penalty},
        {"speed_levels", w.speed_levels},
        {"cruise_speed", w.cruise_speed},
        {"power_levels", w.power_levels},
        {"reference_power", w.reference_power},
        {"packet_air_time", w.packet_air_time},
        {"sensor_battery_init", w.sensor_battery_init},
        {"uav_battery_init", w.uav_battery_init},
        {"energy_weight", w.energy_weight},
        {"horizon", c.horizon},
        {"replications", c.replications},
        {"base_seed", c.base_seed},
        {"demonstrations",
         {{"k_recent", c.demonstrations.k_recent},
          {"k_best", c.demonstrations.k_best},
          {"feedback_window", c.demonstrations.feedback_window}}},
    };
    json backend = {
        {"kind", std::string(to_string(c.backend.kind))},
        {"w_queue", c.backend.weights.queue},
        {"w_channel", c.backend.weights.channel},
    };
    switch (c.backend.kind) {
    case BackendKind::BruteForce: backend["lookahead"] = c.backend.lookahead; break;
    case BackendKind::MockLlm:
        backend["max_retries"] = c.backend.max_retries;
        backend["system_prompt"] = c.backend.system_prompt;
        break;
    case BackendKind::RemoteLlm:
        backend["max_retries"] = c.backend.remote.max_retries;
        backend["base_url"] = c.backend.remote.base_url;
        backend["model"] = c.backend.remote.model;
        backend["temperature"] = c.backend.remote.temperature;
        backend["timeout_ms"] = c.backend.remote.timeout_ms;
        backend["backoff_base_ms"] = c.backend.remote.backoff_base_ms;
        backend["system_prompt"] = c.backend.system_prompt;
        break;
    default: break;
    }
    doc["backend"] = backend;
    doc["attack"] = c.attack ? json{{"kind", std::string(to_string(c.attack->kind))},
                                    {"severity", c.attack->severity}}
                             : json(nullptr);
    doc["sweep"] = c.sweep ? json{{"variable", sweep_variable_name(c.sweep->variable)},
                                  {"values", c.sweep->values}}
                           : json(nullptr);
    return doc;
}

std::string config_digest(const ExperimentConfig& config)
{
    return fmt::format("{:016x}", fnv1a64(effective_config(config).dump()));
}

EpisodeMetrics run_replication(const ExperimentConfig& cell, std::size_t replication,
                               std::shared_ptr<ChatTransport> transport)
{
    WorldConfig wc = cell.world;
    wc.rng_seed = cell.base_seed + replication;
    WorldState world = init_world(wc);
    auto backend = make_backend(cell.backend, cell.task, wc.rng_seed, std::move(transport));
    EpisodeOptions opts;
    opts.kind = cell.task;
    opts.horizon = cell.horizon;
    opts.policy = cell.demonstrations;
    opts.weights = cell.backend.weights;
    opts.attack = cell.attack;
    EpisodeMetrics m = run_episode(world, *backend, opts);
    m.config_digest = config_digest(cell);
    return m;
}

std::string episode_csv(const EpisodeMetrics& m)
{
    std::string out;
    out += fmt::format("# {} seed={} digest={}\n", kCsvSchema, m.seed, m.config_digest);
    out += kCsvHeader;
    out += '\n';
    for (const auto& r : m.rows) {
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.slot, r.action, r.overflow_loss,
                           r.channel_loss, r.delivered, format_number(r.energy_mj),
                           format_number(r.scalar_cost), r.fallback_used ? 1 : 0,
                           r.attack_applied ? 1 : 0);
    }
    return out;
}

CellStats cell_stats(std::vector<double> costs)
{
    CellStats s;
    s.n = costs.size();
    if (costs.empty()) return s;
    std::sort(costs.begin(), costs.end());
    s.median = quantile_sorted(costs, 0.5);
    s.q1 = quantile_sorted(costs, 0.25);
    s.q3 = quantile_sorted(costs, 0.75);
    s.iqr = s.q3 - s.q1;
    double sum = 0.0;
    for (double c : costs) sum += c;
    s.mean = sum / static_cast<double>(costs.size());
    return s;
}

ExperimentOutcome run_experiment(const ExperimentConfig& config,
                                 std::shared_ptr<ChatTransport> transport)
{
    config.validate();
    fs::create_directories(config.output_dir);

    std::vector<std::optional<double>> cell_values;
    if (config.sweep) {
        for (double v : config.sweep->values) cell_values.emplace_back(v);
    } else {
        cell_values.emplace_back(std::nullopt);
    }

    ExperimentOutcome outcome;
    json cells = json::array();
    for (const auto& value : cell_values) {
        const ExperimentConfig cell = value ? apply_sweep_value(config, *value) : config;
        cell.validate();
        const std::string label = cell_label(config, value);

        std::vector<EpisodeMetrics> episodes(cell.replications);
        std::vector<std::string> errors(cell.replications);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < cell.replications; i = next++) {
                try {
                    episodes[i] = run_replication(cell, i, transport);
                } catch (const std::exception& e) {
                    episodes[i].complete = false;
                    episodes[i].seed = cell.base_seed + i;
                    errors[i] = e.what();
                    episodes[i].failure = e.what();
                }
            }
        };
        const std::size_t n_threads = std::min(config.threads, cell.replications);
        if (n_threads <= 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        }

        json eps = json::array();
        std::vector<double> costs;
        std::size_t failed = 0;
        for (std::size_t i = 0; i < episodes.size(); ++i) {
            const EpisodeMetrics& m = episodes[i];
            const fs::path csv =
                config.output_dir / fmt::format("{}{}_seed{}.csv", config.name, label, m.seed);
            if (errors[i].empty()) {
                write_file(csv, episode_csv(m));
                outcome.csv_paths.push_back(csv);
            }
            eps.push_back(episode_json(m, errors[i].empty() ? csv : fs::path()));
            if (m.complete && errors[i].empty()) {
                costs.push_back(m.totals.cost);
            } else {
                ++failed;
            }
        }
        if (failed == cell.replications) outcome.failed = true;

        const CellStats st = cell_stats(costs);
        cells.push_back({
            {"value", value ? json(*value) : json(nullptr)},
            {"config_digest", config_digest(cell)},
            {"episodes", eps},
            {"failed", failed},
            {"stats",
             {{"n", st.n},
              {"median", st.median},
              {"mean", st.mean},
              {"q1", st.q1},
              {"q3", st.q3},
              {"iqr", st.iqr}}},
        });
    }

    outcome.summary = {
        {"schema", std::string(kSummarySchema)},
        {"csv_schema", std::string(kCsvSchema)},
        {"name", config.name},
        {"task", std::string(to_string(config.task))},
        {"backend", std::string(to_string(config.backend.kind))},
        {"config_digest", config_digest(config)},
        {"config", effective_config(config)},
        {"sweep_variable",
         config.sweep ? json(sweep_variable_name(config.sweep->variable)) : json(nullptr)},
        {"cells", cells},
    };
    outcome.summary_path = config.output_dir / (config.name + "_summary.json");
    write_file(outcome.summary_path, outcome.summary.dump(2) + "\n");
    return outcome;
}

double sign_test_p_value(std::size_t wins, std::size_t trials)
{
    if (trials == 0) return 1.0;
    const std::size_t k = std::min(wins, trials - wins);
    // P(X <= k) under Binomial(trials, 1/2), accumulated in log space.
    double tail = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
        const double log_term = std::lgamma(trials + 1.0) - std::lgamma(i + 1.0) -
                                std::lgamma(trials - i + 1.0) - trials * std::log(2.0);
        tail += std::exp(log_term);
    }
    return std::min(1.0, 2.0 * tail);
}

json compare(const json& a, const json& b)
{
    try {
        if (a.at("sweep_variable") != b.at("sweep_variable")) {
            throw MetricError("compare: sweep variables differ");
        }
        const json& ca = a.at("cells");
        const json& cb = b.at("cells");
        if (ca.size() != cb.size()) throw MetricError("compare: sweep axes differ in length");

        json rows = json::array();
        for (std::size_t i = 0; i < ca.size(); ++i) {
            if (ca[i].at("value") != cb[i].at("value")) {
                throw MetricError("compare: sweep axis values differ at cell " + std::to_string(i));
            }
            const double ma = ca[i].at("stats").at("median").get<double>();
            const double mb = cb[i].at("stats").at("median").get<double>();
            const double ratio =
                ma == mb ? 1.0 : ma / std::max(mb, kDegradationEpsilon);

            std::size_t wins = 0, losses = 0, ties = 0;
            const json& ea = ca[i].at("episodes");
            const json& eb = cb[i].at("episodes");
            const std::size_t paired = std::min(ea.size(), eb.size());
            for (std::size_t k = 0; k < paired; ++k) {
                if (!ea[k].at("complete").get<bool>() || !eb[k].at("complete").get<bool>()) continue;
                const double x = ea[k].at("cumulative_cost").get<double>();
                const double y = eb[k].at("cumulative_cost").get<double>();
                if (x < y) {
                    ++wins;
                } else if (x > y) {
                    ++losses;
                } else {
                    ++ties;
                }
            }
            rows.push_back({
                {"value", ca[i].at("value")},
                {"median_a", ma},
                {"median_b", mb},
                {"ratio", ratio},
                {"a_lower", wins},
                {"b_lower", losses},
                {"ties", ties},
                {"sign_test_p", sign_test_p_value(wins, wins + losses)},
            });
        }
        return {
            {"schema", std::string(kCompareSchema)},
            {"a", a.value("name", "")},
            {"b", b.value("name", "")},
            {"sweep_variable", a.at("sweep_variable")},
            {"cells", rows},
        };
    } catch (const json::exception& e) {
        throw MetricError(std::string("compare: malformed summary: ") + e.what());
    }
}

std::string compare_table(const json& report)
{
    const std::string var =
        report["sweep_variable"].is_null() ? "cell" : report["sweep_variable"].get<std::string>();
    std::string out = fmt::format("{:>12} {:>14} {:>14} {:>8} {:>5} {:>5} {:>5} {:>9}\n", var,
                                  "median_a", "median_b", "ratio", "a<b", "a>b", "tie", "p");
    for (const auto& r : report["cells"]) {
        const std::string v = r["value"].is_null() ? "-" : format_number(r["value"].get<double>());
        out += fmt::format("{:>12} {:>14.4f} {:>14.4f} {:>8.4f} {:>5} {:>5} {:>5} {:>9.4g}\n", v,
                           r["median_a"].get<double>(), r["median_b"].get<double>(),
                           r["ratio"].get<double>(), r["a_lower"].get<std::size_t>(),
                           r["b_lower"].get<std::size_t>(), r["ties"].get<std::size_t>(),
                           r["sign_test_p"].get<double>());
    }
    return out;
}

}  // namespace uasnet
