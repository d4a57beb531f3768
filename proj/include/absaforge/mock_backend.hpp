#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absaforge/gateway.hpp"

namespace absaforge {

// Deterministic behavior overrides for tests. Exact-reply maps are keyed by
// the source sentence extracted from the prompt, so behavior stays a pure
// function of the messages rather than of call order.
struct MockScript {
    // ADA: return the original aspect term for call ordinals < k.
    int repeat_original_first_k = 0;
    // CDA: always drop the aspect term from the paraphrase (exercises fallback).
    bool cda_drop_aspect = false;
    // Exact replies by source sentence; fall back to the rule-based behavior.
    std::map<std::string, std::string> cda_reply_by_sentence;
    std::map<std::string, std::string> ada_reply_by_sentence;
};

// Offline stand-in for a chat backend. Output is a pure function of
// (messages, seed, call ordinal):
//   - CDA-shaped prompts: synonym-table paraphrase of non-aspect words with
//     the aspect term preserved verbatim;
//   - ADA-shaped prompts: an aspect term drawn from a fixed per-domain lexicon.
class MockBackend : public ChatBackend {
public:
    explicit MockBackend(std::uint64_t seed = 0, std::string domain = "restaurant",
                         MockScript script = {});

    std::string id() const override;
    std::string complete(const PromptRequest& req, int ordinal) override;

    // The fixed lexicon used for ADA replies in `domain` (falls back to a
    // generic list for unknown domains).
    static const std::vector<std::string>& lexicon(const std::string& domain);

private:
    std::uint64_t seed_;
    std::string domain_;
    MockScript script_;
};

// Rule-based paraphrase used by the mock: substitutes synonym-table words
// outside the first occurrence of `aspect`, which is kept verbatim.
std::string mock_paraphrase(const std::string& sentence, const std::string& aspect);

}  // namespace absaforge
