#pragma once

#include <filesystem>
#include <vector>

#include "absaforge/augment.hpp"
#include "absaforge/corpus.hpp"

namespace absaforge {

// JSONL interchange between pipeline stages: one UTF-8 JSON object per line.
//
// Triplet lines:   {id, sentence, aspect, aspect_from, aspect_to, polarity, domain}
// Augmented lines: {source_id, aug_sentence, aug_aspect, polarity, strategy,
//                   verify, retries_used, verified_distinct, fallback}
// Polarity is serialized as the integer -1/0/1; read(write(x)) == x.

void write_jsonl(const std::vector<Triplet>& items, const std::filesystem::path& path);
void write_jsonl(const std::vector<AugmentedSample>& items, const std::filesystem::path& path);

// Throw SchemaError naming the line number and field on any malformed record,
// and Error on I/O failure.
std::vector<Triplet> read_triplets_jsonl(const std::filesystem::path& path);
std::vector<AugmentedSample> read_augmented_jsonl(const std::filesystem::path& path);

}  // namespace absaforge
