#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace absaforge {

// Sentiment polarity toward an aspect term. Serialized as -1/0/1.
enum class Polarity : int { negative = -1, neutral = 0, positive = 1 };

// Fixed class-index mapping used everywhere: -1 -> 0, 0 -> 1, 1 -> 2.
constexpr int kNumClasses = 3;
int class_index(Polarity p);
Polarity polarity_from_index(int idx);
Polarity polarity_from_int(int value);  // throws SchemaError for values outside {-1,0,1}

// Review domains. "restaurant" and "laptop" are the canonical SemEval-2014
// domains; any other string is an open domain tag.
namespace domain {
inline const std::string restaurant = "restaurant";
inline const std::string laptop = "laptop";
}  // namespace domain

// One labeled review: a sentence, one aspect-term span inside it, and the
// polarity toward that aspect. Offsets are character (code point) offsets,
// from inclusive, to exclusive.
struct Triplet {
    std::string id;  // "<sentence id>:<aspect index>"
    std::string sentence;
    std::string aspect;
    int aspect_from = 0;
    int aspect_to = 0;
    Polarity polarity = Polarity::neutral;
    std::string domain;

    bool operator==(const Triplet&) const = default;
};

enum class Split { train, test };
std::string_view split_name(Split s);

// Per-polarity triplet counts for one split.
struct CorpusStats {
    Split split = Split::train;
    std::array<long, kNumClasses> counts{};  // indexed by class_index

    long negative() const { return counts[0]; }
    long neutral() const { return counts[1]; }
    long positive() const { return counts[2]; }
    long total() const { return counts[0] + counts[1] + counts[2]; }
};

// Summary of entries the parser skipped instead of aborting on.
struct ParseReport {
    long sentences = 0;
    long aspect_terms = 0;        // all <aspectTerm> entries seen
    long conflict_skipped = 0;    // polarity="conflict"
    long invalid_skipped = 0;     // offset/term mismatch or other per-entry defects
    std::vector<std::string> invalid_ids;  // sentence ids of invalid entries
};

// Parses a SemEval-2014 Task 4 document (<sentences><sentence><text> +
// <aspectTerms><aspectTerm term polarity from to/>) into triplets in document
// order. "conflict" entries and entries whose from/to span does not match the
// term (after whitespace normalization) are skipped and counted in `report`.
// Throws ParseError on malformed XML.
std::vector<Triplet> parse_semeval_xml(std::string_view xml, const std::string& domain,
                                       ParseReport& report);
std::vector<Triplet> parse_semeval_xml(std::string_view xml, const std::string& domain);

CorpusStats compute_stats(const std::vector<Triplet>& triplets, Split split);

}  // namespace absaforge
