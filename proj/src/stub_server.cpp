#include "uasnet/stub_server.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "uasnet/backends.hpp"
#include "uasnet/errors.hpp"

namespace uasnet {

using nlohmann::json;

StubScenario parse_stub_scenario(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario", e.what());
    }
    StubScenario sc;
    const std::string mode = doc.value("mode", "sequence");
    if (mode == "sequence") {
        sc.mode = StubScenario::Mode::Sequence;
    } else if (mode == "cycle") {
        sc.mode = StubScenario::Mode::Cycle;
    } else if (mode == "mock") {
        sc.mode = StubScenario::Mode::Mock;
    } else {
        throw ConfigError("mode", "unknown stub mode '" + mode + "'");
    }
    for (const auto& r : doc.value("responses", json::array())) {
        StubReply reply;
        reply.status = r.value("status", 200);
        reply.content = r.value("content", "");
        reply.delay_ms = r.value("delay_ms", 0);
        sc.replies.push_back(reply);
    }
    if (sc.mode != StubScenario::Mode::Mock && sc.replies.empty()) {
        throw ConfigError("responses", "needs at least one reply");
    }
    return sc;
}

StubScenario load_stub_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_stub_scenario(ss.str());
}

StubServer::StubServer(StubScenario scenario)
    : scenario_(std::move(scenario)), server_(std::make_unique<httplib::Server>())
{
    install_routes();
}

StubServer::~StubServer() { stop(); }

void StubServer::install_routes()
{
    server_->Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
        ++requests_;
        StubReply reply;
        if (scenario_.mode == StubScenario::Mode::Mock) {
            try {
                const json body = json::parse(req.body);
                Prompt prompt;
                for (const auto& m : body.at("messages")) {
                    if (m.at("role") == "system") prompt.system = m.at("content");
                    if (m.at("role") == "user") prompt.user = m.at("content");
                }
                reply.content = mock_llm(prompt);
            } catch (const json::exception& e) {
                reply.status = 400;
                reply.content = e.what();
            }
        } else {
            std::lock_guard lock(mutex_);
            const std::size_t n = scenario_.replies.size();
            const std::size_t i = scenario_.mode == StubScenario::Mode::Cycle
                                      ? cursor_ % n
                                      : std::min(cursor_, n - 1);
            ++cursor_;
            reply = scenario_.replies[i];
        }
        if (reply.delay_ms > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(reply.delay_ms));
        }
        res.status = reply.status;
        if (reply.status == 200) {
            const json out = {
                {"id", "stub-" + std::to_string(requests_.load())},
                {"object", "chat.completion"},
                {"choices", json::array({{{"index", 0},
                                          {"message", {{"role", "assistant"},
                                                       {"content", reply.content}}},
                                          {"finish_reason", "stop"}}})},
            };
            res.set_content(out.dump(), "application/json");
        } else {
            res.set_content(json{{"error", {{"message", reply.content}}}}.dump(),
                            "application/json");
        }
    });
    server_->Get("/stats", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(json{{"requests", requests_.load()}}.dump(), "application/json");
    });
}

int StubServer::start(int port)
{
    if (port == 0) {
        port_ = server_->bind_to_any_port("127.0.0.1");
    } else {
        if (!server_->bind_to_port("127.0.0.1", port)) {
            throw ConfigError("port", "cannot bind 127.0.0.1:" + std::to_string(port));
        }
        port_ = port;
    }
    if (port_ <= 0) throw ConfigError("port", "cannot bind a local port");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return port_;
}

void StubServer::listen(const std::string& host, int port)
{
    port_ = port;
    if (!server_->listen(host, port)) {
        throw ConfigError("port", "cannot listen on " + host + ":" + std::to_string(port));
    }
}

void StubServer::stop()
{
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

std::string StubServer::base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }

}  // namespace uasnet
