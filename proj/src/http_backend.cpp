#include "absaforge/http_backend.hpp"

#include <cstdlib>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "absaforge/errors.hpp"

namespace absaforge {

using json = nlohmann::json;

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {}

std::string HttpBackend::id() const { return "openai:" + options_.base_url; }

std::string HttpBackend::complete(const PromptRequest& req, int /*ordinal*/) {
    json body = {
        {"model", req.model},
        {"messages", json::array()},
        {"temperature", req.temperature},
    };
    for (const auto& m : req.messages)
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});

    httplib::Client client(options_.base_url);
    client.set_connection_timeout(std::chrono::duration<double>(options_.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(options_.timeout_s));

    httplib::Headers headers;
    if (const char* key = std::getenv(kApiKeyEnvVar); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    } else if (options_.require_api_key) {
        throw ConfigError(std::string("API key not set; export ") + kApiKeyEnvVar);
    }

    auto result = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
    if (!result) {
        throw TransportError("connection to " + options_.base_url + " failed: " +
                                 httplib::to_string(result.error()),
                             0, /*retryable=*/true);
    }
    const int status = result->status;
    if (status == 429 || status >= 500) {
        throw TransportError("HTTP " + std::to_string(status) + " from " + options_.base_url,
                             status, /*retryable=*/true);
    }
    if (status != 200) {
        throw TransportError("HTTP " + std::to_string(status) + " from " + options_.base_url +
                                 ": " + result->body,
                             status, /*retryable=*/false);
    }

    json reply = json::parse(result->body, nullptr, /*allow_exceptions=*/false);
    if (reply.is_discarded() || !reply.contains("choices") || reply["choices"].empty() ||
        !reply["choices"][0].contains("message") ||
        !reply["choices"][0]["message"].contains("content")) {
        throw SchemaError("chat-completions response missing choices[0].message.content");
    }
    return reply["choices"][0]["message"]["content"].get<std::string>();
}

}  // namespace absaforge
