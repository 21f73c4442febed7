#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace uasnet {

// Canned behaviour of the test LLM server.
//   sequence: replies in order, then repeats the last one
//   cycle:    replies in order, wrapping around
//   mock:     answers each prompt with mock_llm
struct StubReply {
    int status = 200;
    std::string content;
    int delay_ms = 0;
};

struct StubScenario {
    enum class Mode { Sequence, Cycle, Mock };
    Mode mode = Mode::Sequence;
    std::vector<StubReply> replies;
};

// Throws ConfigError on a malformed scenario document.
StubScenario load_stub_scenario(const std::filesystem::path& path);
StubScenario parse_stub_scenario(const std::string& text);

// OpenAI-compatible chat endpoint for tests. GET /stats reports the number
// of chat requests served.
class StubServer {
public:
    explicit StubServer(StubScenario scenario);
    ~StubServer();
    StubServer(const StubServer&) = delete;
    StubServer& operator=(const StubServer&) = delete;

    // Binds 127.0.0.1; port 0 picks a free port. Returns the bound port.
    int start(int port = 0);
    // Blocks the calling thread until stop() (CLI use).
    void listen(const std::string& host, int port);
    void stop();

    std::size_t request_count() const { return requests_.load(); }
    std::string base_url() const;

private:
    void install_routes();

    StubScenario scenario_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    std::atomic<std::size_t> requests_{0};
    std::mutex mutex_;
    std::size_t cursor_ = 0;
    int port_ = 0;
};

}  // namespace uasnet
