#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>

namespace uasnet {

struct RemoteSettings {
    // Empty: taken from ICL_UASNET_BASE_URL.
    std::string base_url;
    std::string model = "local-model";
    double temperature = 0.0;
    int timeout_ms = 10000;
    std::size_t max_retries = 2;
    int backoff_base_ms = 500;

    bool operator==(const RemoteSettings&) const = default;
};

struct ChatRequest {
    std::string model;
    std::string system;
    std::string user;
    double temperature = 0.0;
};

struct TransportReply {
    int status = 0;  // 0: no HTTP response (connect failure, timeout)
    std::string content;
    std::string error;

    bool ok() const { return status == 200 && error.empty(); }
    bool retry_with_backoff() const { return status == 429 || status >= 500; }
};

class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    virtual TransportReply post_chat(const ChatRequest& request,
                                     std::chrono::milliseconds timeout) = 0;
};

// OpenAI-compatible POST {base_url}/v1/chat/completions. Safe to share
// between episodes: every call opens its own client.
class HttpChatTransport : public ChatTransport {
public:
    // Throws ConfigError for a URL that is not http://host[:port][/prefix].
    HttpChatTransport(std::string base_url, std::string api_key);

    TransportReply post_chat(const ChatRequest& request,
                             std::chrono::milliseconds timeout) override;

private:
    std::string origin_;
    std::string path_prefix_;
    std::string api_key_;
};

std::string resolve_base_url(const RemoteSettings& settings);
std::string api_key_from_env();

}  // namespace uasnet
