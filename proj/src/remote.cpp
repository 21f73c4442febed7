#include "uasnet/remote.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "uasnet/errors.hpp"

namespace uasnet {

using nlohmann::json;

std::string resolve_base_url(const RemoteSettings& settings)
{
    if (!settings.base_url.empty()) return settings.base_url;
    if (const char* env = std::getenv("ICL_UASNET_BASE_URL")) return env;
    throw ConfigError("base_url", "not set and ICL_UASNET_BASE_URL is empty");
}

std::string api_key_from_env()
{
    const char* key = std::getenv("ICL_UASNET_API_KEY");
    return key ? key : "";
}

HttpChatTransport::HttpChatTransport(std::string base_url, std::string api_key)
    : api_key_(std::move(api_key))
{
    constexpr std::string_view scheme = "http://";
    if (base_url.rfind(scheme, 0) != 0) {
        throw ConfigError("base_url", "'" + base_url + "' must start with http://");
    }
    const std::size_t host_start = scheme.size();
    const std::size_t slash = base_url.find('/', host_start);
    origin_ = base_url.substr(0, slash);
    path_prefix_ = slash == std::string::npos ? "" : base_url.substr(slash);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();

    const std::string host_port = origin_.substr(host_start);
    if (host_port.empty() || host_port.front() == ':') {
        throw ConfigError("base_url", "'" + base_url + "' has no host");
    }
    const std::size_t colon = host_port.rfind(':');
    if (colon != std::string::npos) {
        const std::string port = host_port.substr(colon + 1);
        if (port.empty() || port.find_first_not_of("0123456789") != std::string::npos ||
            port.size() > 5 || std::stoi(port) > 65535) {
            throw ConfigError("base_url", "'" + base_url + "' has an invalid port");
        }
    }
}

TransportReply HttpChatTransport::post_chat(const ChatRequest& request,
                                            std::chrono::milliseconds timeout)
{
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    if (!api_key_.empty()) client.set_bearer_token_auth(api_key_);

    const json body = {
        {"model", request.model},
        {"messages",
         json::array({{{"role", "system"}, {"content", request.system}},
                      {{"role", "user"}, {"content", request.user}}})},
        {"temperature", request.temperature},
    };

    TransportReply reply;
    auto res = client.Post(path_prefix_ + "/v1/chat/completions", body.dump(), "application/json");
    if (!res) {
        reply.error = httplib::to_string(res.error());
        return reply;
    }
    reply.status = res->status;
    if (res->status != 200) {
        reply.error = "HTTP " + std::to_string(res->status);
        return reply;
    }
    try {
        const json doc = json::parse(res->body);
        reply.content = doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        reply.error = std::string("bad response body: ") + e.what();
    }
    return reply;
}

}  // namespace uasnet
