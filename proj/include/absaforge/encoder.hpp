#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace absaforge {

// Frozen map from a (sentence, aspect) pair to a fixed-dimension real vector.
// The pair is serialized as the literal string "[CLS]{sentence}[SEP]{aspect}[SEP]"
// before embedding, so any backend sees the same paired input format.
class Encoder {
public:
    virtual ~Encoder() = default;

    virtual int dim() const = 0;
    virtual Eigen::VectorXd encode(std::string_view sentence, std::string_view aspect) const = 0;

    static std::string pair_text(std::string_view sentence, std::string_view aspect);
};

// Deterministic feature-hashing bag-of-words embedding: lowercase word tokens
// hashed into signed buckets, accumulated, then L2-normalized. Zero-token
// input yields the zero vector. Requires d >= 8.
Eigen::VectorXd hash_embed(std::string_view text, int d, std::uint64_t seed);

class HashEncoder : public Encoder {
public:
    HashEncoder(int d, std::uint64_t seed);

    int dim() const override { return d_; }
    std::uint64_t seed() const { return seed_; }
    Eigen::VectorXd encode(std::string_view sentence, std::string_view aspect) const override;

private:
    int d_;
    std::uint64_t seed_;
};

// Embeddings fetched from an OpenAI-compatible endpoint:
//   POST {endpoint}/v1/embeddings  body: {model, input}
//   vector at data[0].embedding
// The full-scale path; never exercised against a live service in tests.
class RemoteEncoder : public Encoder {
public:
    RemoteEncoder(std::string endpoint, std::string model, int d, bool require_api_key = true);

    int dim() const override { return d_; }
    const std::string& endpoint() const { return endpoint_; }
    const std::string& model() const { return model_; }
    Eigen::VectorXd encode(std::string_view sentence, std::string_view aspect) const override;

private:
    std::string endpoint_;
    std::string model_;
    int d_;
    bool require_api_key_;
};

// Serializable encoder description (stored in checkpoints).
struct EncoderSpec {
    std::string kind = "hash";  // "hash" or "remote"
    int dim = 256;
    std::uint64_t seed = 42;     // hash variant
    std::string endpoint;        // remote variant
    std::string model;           // remote variant

    bool operator==(const EncoderSpec&) const = default;
};

std::unique_ptr<Encoder> make_encoder(const EncoderSpec& spec);

}  // namespace absaforge
