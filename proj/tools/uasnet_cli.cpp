#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "uasnet/errors.hpp"
#include "uasnet/harness.hpp"
#include "uasnet/stub_server.hpp"

namespace {

using nlohmann::json;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> backend;
};

uasnet::ExperimentConfig load_with_overrides(const std::string& path, const Overrides& o)
{
    uasnet::ExperimentConfig cfg = uasnet::load_config(path);
    if (o.seed) cfg.base_seed = *o.seed;
    if (o.out) cfg.output_dir = *o.out;
    if (o.backend) {
        const auto kind = uasnet::parse_backend_kind(*o.backend);
        if (!kind) throw uasnet::ConfigError("backend", "unknown backend '" + *o.backend + "'");
        cfg.backend.kind = *kind;
    }
    cfg.validate();
    return cfg;
}

json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw uasnet::ConfigFileError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw uasnet::ConfigParseError(path + ": " + e.what());
    }
}

int print_outcome(const uasnet::ExperimentOutcome& outcome)
{
    for (const auto& cell : outcome.summary["cells"]) {
        const auto& st = cell["stats"];
        std::cout << (cell["value"].is_null() ? std::string("cell")
                                              : outcome.summary["sweep_variable"].get<std::string>() +
                                                    "=" + cell["value"].dump())
                  << "  median=" << st["median"] << "  mean=" << st["mean"]
                  << "  iqr=" << st["iqr"] << "  n=" << st["n"] << "  failed=" << cell["failed"]
                  << "\n";
    }
    std::cout << "summary: " << outcome.summary_path.string() << "\n";
    return outcome.failed ? 1 : 0;
}

uasnet::StubServer* g_server = nullptr;

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"UAV-assisted sensor network simulator with an in-context-learning control loop"};
    app.require_subcommand(1);

    Overrides overrides;
    auto add_overrides = [&](CLI::App* sub) {
        sub->add_option("--seed", overrides.seed, "Base seed for replications");
        sub->add_option("--out", overrides.out, "Output directory");
        sub->add_option("--backend", overrides.backend, "Backend kind override");
    };

    std::string run_config;
    auto* run = app.add_subcommand("run", "Run one experiment cell (ignores any sweep block)");
    run->add_option("config", run_config, "Experiment config (JSON)")->required();
    add_overrides(run);

    std::string sweep_config;
    auto* sweep = app.add_subcommand("sweep", "Run every cell of the config's sweep");
    sweep->add_option("config", sweep_config, "Experiment config (JSON)")->required();
    add_overrides(sweep);

    std::string summary_a;
    std::string summary_b;
    std::optional<std::string> compare_out;
    auto* cmp = app.add_subcommand("compare", "Compare two experiment summaries cell by cell");
    cmp->add_option("summary_a", summary_a)->required();
    cmp->add_option("summary_b", summary_b)->required();
    cmp->add_option("--out", compare_out, "Write the comparison report (JSON) here");

    int port = 8089;
    std::optional<std::string> scenario_path;
    auto* stub = app.add_subcommand("stub-server", "Serve the test LLM stub");
    stub->add_option("--port", port, "Listen port")->required();
    stub->add_option("--scenario", scenario_path, "Scenario JSON (default: mock mode)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            auto cfg = load_with_overrides(run_config, overrides);
            cfg.sweep.reset();
            return print_outcome(uasnet::run_experiment(cfg));
        }
        if (*sweep) {
            auto cfg = load_with_overrides(sweep_config, overrides);
            if (!cfg.sweep) throw uasnet::ConfigError("sweep", "sweep needs a sweep block");
            return print_outcome(uasnet::run_experiment(cfg));
        }
        if (*cmp) {
            const json report = uasnet::compare(read_json(summary_a), read_json(summary_b));
            std::cout << uasnet::compare_table(report);
            if (compare_out) {
                std::ofstream out(*compare_out);
                out << report.dump(2) << "\n";
            }
            return 0;
        }
        if (*stub) {
            uasnet::StubScenario sc;
            sc.mode = uasnet::StubScenario::Mode::Mock;
            if (scenario_path) sc = uasnet::load_stub_scenario(*scenario_path);
            uasnet::StubServer server(sc);
            g_server = &server;
            std::signal(SIGINT, [](int) {
                if (g_server) g_server->stop();
            });
            std::cout << "stub server on http://127.0.0.1:" << port << "\n" << std::flush;
            server.listen("127.0.0.1", port);
            return 0;
        }
    } catch (const uasnet::ConfigFileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const uasnet::ConfigParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const uasnet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
