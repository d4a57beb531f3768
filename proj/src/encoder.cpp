#include "absaforge/encoder.hpp"

#include <cctype>
#include <cstdlib>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "absaforge/errors.hpp"
#include "absaforge/http_backend.hpp"
#include "absaforge/text.hpp"

namespace absaforge {

std::string Encoder::pair_text(std::string_view sentence, std::string_view aspect) {
    std::string out;
    out.reserve(sentence.size() + aspect.size() + 16);
    out += "[CLS]";
    out += sentence;
    out += "[SEP]";
    out += aspect;
    out += "[SEP]";
    return out;
}

Eigen::VectorXd hash_embed(std::string_view text, int d, std::uint64_t seed) {
    if (d < 8) throw ContractViolation("hash_embed needs d >= 8, got " + std::to_string(d));
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);

    // Tokens are maximal runs of alphanumerics; bytes >= 0x80 count as word
    // bytes so UTF-8 words stay in one token.
    auto is_word_byte = [](unsigned char c) {
        return std::isalnum(c) != 0 || c >= 0x80;
    };
    std::size_t i = 0;
    bool any = false;
    while (i < text.size()) {
        if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
        const std::string token = to_lower_ascii(text.substr(i, j - i));
        const std::uint64_t h = splitmix64(fnv1a64(token) + seed * 0x9e3779b97f4a7c15ULL);
        const auto bucket = static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(d));
        v[bucket] += (h >> 63) ? -1.0 : 1.0;
        any = true;
        i = j;
    }
    if (!any) return v;  // zero-token input: zero vector by definition
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

HashEncoder::HashEncoder(int d, std::uint64_t seed) : d_(d), seed_(seed) {
    if (d < 8) throw ContractViolation("HashEncoder needs d >= 8");
}

Eigen::VectorXd HashEncoder::encode(std::string_view sentence, std::string_view aspect) const {
    return hash_embed(pair_text(sentence, aspect), d_, seed_);
}

RemoteEncoder::RemoteEncoder(std::string endpoint, std::string model, int d, bool require_api_key)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), d_(d),
      require_api_key_(require_api_key) {
    if (d < 1) throw ContractViolation("RemoteEncoder dimension must be positive");
}

Eigen::VectorXd RemoteEncoder::encode(std::string_view sentence, std::string_view aspect) const {
    nlohmann::json body = {
        {"model", model_},
        {"input", pair_text(sentence, aspect)},
    };

    httplib::Client client(endpoint_);
    httplib::Headers headers;
    if (const char* key = std::getenv(kApiKeyEnvVar); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    } else if (require_api_key_) {
        throw ConfigError(std::string("API key not set; export ") + kApiKeyEnvVar);
    }
    auto result = client.Post("/v1/embeddings", headers, body.dump(), "application/json");
    if (!result)
        throw TransportError("connection to " + endpoint_ + " failed", 0, /*retryable=*/true);
    if (result->status != 200)
        throw TransportError("HTTP " + std::to_string(result->status) + " from " + endpoint_,
                             result->status, result->status == 429 || result->status >= 500);

    nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("data") || reply["data"].empty() ||
        !reply["data"][0].contains("embedding"))
        throw SchemaError("embeddings response missing data[0].embedding");
    const auto& emb = reply["data"][0]["embedding"];
    if (static_cast<int>(emb.size()) != d_)
        throw SchemaError("embedding dimension " + std::to_string(emb.size()) +
                          " does not match configured d=" + std::to_string(d_));
    Eigen::VectorXd v(d_);
    for (int i = 0; i < d_; ++i) v[i] = emb[static_cast<std::size_t>(i)].get<double>();
    return v;
}

std::unique_ptr<Encoder> make_encoder(const EncoderSpec& spec) {
    if (spec.kind == "hash") return std::make_unique<HashEncoder>(spec.dim, spec.seed);
    if (spec.kind == "remote")
        return std::make_unique<RemoteEncoder>(spec.endpoint, spec.model, spec.dim);
    throw ConfigError("unknown encoder kind '" + spec.kind + "'");
}

}  // namespace absaforge
