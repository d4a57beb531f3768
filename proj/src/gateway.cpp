#include "absaforge/gateway.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include <nlohmann/json.hpp>

#include "absaforge/errors.hpp"

namespace absaforge {

using json = nlohmann::json;

void PromptRequest::validate() const {
    if (messages.empty()) throw ContractViolation("PromptRequest needs at least one message");
    if (!std::isfinite(temperature) || temperature < 0.0 || temperature > 2.0)
        throw ContractViolation("temperature must be finite and in [0, 2]");
    if (max_retries < 0) throw ContractViolation("max_retries must be non-negative");
}

std::string serialize_messages(const std::vector<ChatMessage>& messages) {
    json arr = json::array();
    for (const auto& m : messages) arr.push_back({{"role", m.role}, {"content", m.content}});
    return arr.dump();
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw Error("SHA-256 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (unsigned int i = 0; i < len; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xF];
    }
    return out;
}

CacheKey CacheKey::make(std::string_view backend_id, const PromptRequest& req, int ordinal) {
    char temp[40];
    std::snprintf(temp, sizeof(temp), "%.17g", req.temperature);
    std::string input;
    input.append(backend_id);
    input.push_back('\n');
    input.append(req.model);
    input.push_back('\n');
    input.append(temp);
    input.push_back('\n');
    input.append(serialize_messages(req.messages));
    input.push_back('\n');
    input.append(std::to_string(ordinal));
    return CacheKey{sha256_hex(input)};
}

double BackoffPolicy::delay_s(int retry, std::mt19937_64& rng) const {
    const double base = initial_s * std::pow(factor, retry - 1);
    std::uniform_real_distribution<double> jitter_factor(1.0 - jitter, 1.0 + jitter);
    return std::min(base * jitter_factor(rng), cap_s);
}

ResponseCache::ResponseCache(std::filesystem::path journal_path) : path_(std::move(journal_path)) {
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
        // A torn line from a crashed writer fails to parse; skip it.
        if (rec.is_discarded() || !rec.contains("digest") || !rec.contains("response_text"))
            continue;
        entries_[rec["digest"].get<std::string>()] = rec["response_text"].get<std::string>();
    }
    in.close();
    // A torn trailing line also lacks its newline; appending straight after it
    // would merge the next record into the garbage. Start a fresh line instead.
    bool needs_newline = false;
    if (std::ifstream probe(path_, std::ios::binary); probe) {
        probe.seekg(0, std::ios::end);
        if (probe.tellg() > 0) {
            probe.seekg(-1, std::ios::end);
            char last = '\n';
            probe.get(last);
            needs_newline = last != '\n';
        }
    }
    out_.open(path_, std::ios::app);
    if (!out_) throw Error("cannot open cache journal for append: " + path_.string());
    if (needs_newline) out_ << '\n';
}

std::optional<std::string> ResponseCache::lookup(const std::string& digest) const {
    std::lock_guard lock(mu_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ResponseCache::store(const Record& record) {
    json rec = {
        {"digest", record.digest},
        {"model", record.model},
        {"temperature", record.temperature},
        {"messages_hash_input", record.messages_hash_input},
        {"response_text", record.response_text},
        {"timestamp",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
    };
    // One write() call for the whole line keeps a crashed run from leaving a
    // readable half-entry: partial lines fail to parse and are skipped on load.
    const std::string line = rec.dump() + "\n";
    std::lock_guard lock(mu_);
    if (entries_.contains(record.digest)) return;
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.flush();
    entries_[record.digest] = record.response_text;
}

std::size_t ResponseCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

Gateway::Gateway(std::shared_ptr<ChatBackend> backend,
                 std::optional<std::filesystem::path> cache_path, int max_concurrency,
                 BackoffPolicy backoff, std::uint64_t seed)
    : backend_(std::move(backend)),
      slots_(max_concurrency > 0 ? max_concurrency : 1),
      backoff_(backoff),
      rng_(seed) {
    if (cache_path) cache_ = std::make_unique<ResponseCache>(*cache_path);
}

ChatResponse Gateway::complete(const PromptRequest& req, int ordinal) {
    req.validate();
    const CacheKey key = CacheKey::make(backend_->id(), req, ordinal);
    if (cache_) {
        if (auto hit = cache_->lookup(key.digest)) return {*hit, true, 1};
    }

    slots_.acquire();
    struct Release {
        std::counting_semaphore<>& s;
        ~Release() { s.release(); }
    } release{slots_};

    std::string text;
    int attempt = 0;
    for (;;) {
        ++attempt;
        try {
            text = backend_->complete(req, ordinal);
            {
                std::lock_guard lock(mu_);
                ++backend_calls_;
            }
            break;
        } catch (const TransportError& err) {
            {
                std::lock_guard lock(mu_);
                ++backend_calls_;
            }
            if (!err.retryable() || attempt > req.max_retries) throw;
            double delay;
            {
                std::lock_guard lock(mu_);
                delay = backoff_.delay_s(attempt, rng_);
            }
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
    }

    if (cache_) {
        cache_->store({key.digest, req.model, req.temperature, serialize_messages(req.messages),
                       text});
    }
    return {text, false, attempt};
}

long Gateway::backend_calls() const {
    std::lock_guard lock(mu_);
    return backend_calls_;
}

}  // namespace absaforge
