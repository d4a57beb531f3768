#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <vector>

namespace absaforge {

struct ChatMessage {
    std::string role;  // "system" or "user"
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

// One chat-completion request. `max_retries` bounds transport-level retries
// inside a single complete() call; the verification loop's re-queries are a
// separate mechanism (the retry ordinal).
struct PromptRequest {
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    std::vector<ChatMessage> messages;
    int max_retries = 3;

    void validate() const;  // at least one message, finite temperature in [0, 2]
};

struct ChatResponse {
    std::string text;
    bool from_cache = false;
    int attempt_count = 1;  // backend attempts performed (1 when served from cache)
};

// Content digest identifying one logical round-trip. The retry ordinal makes
// re-queries of an identical prompt distinct keys, so the verification loop
// can obtain fresh answers through the cache.
struct CacheKey {
    std::string digest;  // SHA-256 hex

    static CacheKey make(std::string_view backend_id, const PromptRequest& req, int ordinal);
};

// Canonical JSON serialization of the message list (digest input).
std::string serialize_messages(const std::vector<ChatMessage>& messages);

// SHA-256 of `bytes`, lowercase hex.
std::string sha256_hex(std::string_view bytes);

// Transport abstraction over one chat-completion provider.
class ChatBackend {
public:
    virtual ~ChatBackend() = default;

    // Stable identifier mixed into cache keys.
    virtual std::string id() const = 0;

    // Performs one round-trip and returns the reply text.
    // Throws TransportError on failure (retryable or not).
    virtual std::string complete(const PromptRequest& req, int ordinal) = 0;
};

// Exponential backoff: initial 1 s, x2 per attempt, jitter +/-20 %, cap 30 s.
struct BackoffPolicy {
    double initial_s = 1.0;
    double factor = 2.0;
    double jitter = 0.2;
    double cap_s = 30.0;

    // Delay before retry number `retry` (1-based).
    double delay_s(int retry, std::mt19937_64& rng) const;
};

// Append-only JSONL response cache keyed by digest. Safe for concurrent
// readers with a single writer per key; a torn trailing line from a crashed
// run is ignored on load.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path journal_path);

    std::optional<std::string> lookup(const std::string& digest) const;

    struct Record {
        std::string digest;
        std::string model;
        double temperature = 0.0;
        std::string messages_hash_input;
        std::string response_text;
    };
    void store(const Record& record);

    std::size_t size() const;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::unordered_map<std::string, std::string> entries_;
    std::ofstream out_;
};

// Cache-backed retrying client. Up to `max_concurrency` requests may be in
// flight at once; complete() may be called from multiple threads.
class Gateway {
public:
    Gateway(std::shared_ptr<ChatBackend> backend,
            std::optional<std::filesystem::path> cache_path = std::nullopt,
            int max_concurrency = 4, BackoffPolicy backoff = {}, std::uint64_t seed = 0);

    // Returns the cached reply when the key exists; otherwise performs the
    // round-trip (with retries on transient failures) and stores the result.
    ChatResponse complete(const PromptRequest& req, int ordinal = 0);

    // Backend round-trips performed so far (cache hits excluded).
    long backend_calls() const;

    ChatBackend& backend() { return *backend_; }

private:
    std::shared_ptr<ChatBackend> backend_;
    std::unique_ptr<ResponseCache> cache_;
    std::counting_semaphore<> slots_;
    BackoffPolicy backoff_;
    mutable std::mutex mu_;
    std::mt19937_64 rng_;
    long backend_calls_ = 0;
};

}  // namespace absaforge
