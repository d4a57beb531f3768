#pragma once

#include <string>

#include "absaforge/gateway.hpp"

namespace absaforge {

// Environment variable holding the API credential. Read at request time and
// never written to the cache or any config file.
inline constexpr const char* kApiKeyEnvVar = "ABSA_FORGE_API_KEY";

struct HttpBackendOptions {
    std::string base_url = "https://api.openai.com";
    double timeout_s = 60.0;
    bool require_api_key = true;  // plain test servers may run without one
};

// OpenAI-compatible chat-completions transport:
//   POST {base_url}/v1/chat/completions   body: {model, messages, temperature}
//   reply text at choices[0].message.content
class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(HttpBackendOptions options);

    std::string id() const override;
    std::string complete(const PromptRequest& req, int ordinal) override;

private:
    HttpBackendOptions options_;
};

}  // namespace absaforge
