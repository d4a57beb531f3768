#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absaforge/corpus.hpp"

namespace absaforge {

// One in-prompt demonstration for context-focused augmentation: a source
// sentence and its paraphrase, aspect term kept verbatim in both.
struct ExemplarPair {
    std::string source_sentence;
    std::string augmented_sentence;
    std::string domain;

    bool operator==(const ExemplarPair&) const = default;
};

// Built-in demonstration pairs used when a domain has none configured.
const std::vector<ExemplarPair>& default_exemplars(const std::string& domain);

// Renders the context-focused augmentation prompt. Exactly two exemplars are
// required; the rendered text closes with "Please only output the New
// sentence." and is byte-stable for identical inputs.
std::string build_cda_prompt(const Triplet& t, const std::vector<ExemplarPair>& exemplars);

// Renders the aspect-replacement prompt (no exemplar block); closes with
// "Please only output the new aspect term."
std::string build_ada_prompt(const Triplet& t);

// Cleans a raw model reply into a usable aspect term: trims whitespace,
// strips a leading "New aspect term:"-style label, matched quotation marks
// and trailing sentence punctuation, and collapses internal whitespace runs.
// Throws ValidationError when nothing remains.
std::string sanitize_aspect(std::string_view raw);

// Replaces the aspect inside `sentence`. With `span` (character offsets,
// from/to) exactly that range is replaced; without one, the first
// case-insensitive occurrence of `old_aspect` is replaced. Throws
// ValidationError when no span is given and `old_aspect` does not occur.
std::string substitute_aspect(std::string_view sentence,
                              std::optional<std::pair<int, int>> span,
                              std::string_view old_aspect, std::string_view new_aspect);

}  // namespace absaforge
