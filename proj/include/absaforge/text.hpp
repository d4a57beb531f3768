#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace absaforge {

// --- UTF-8 helpers -----------------------------------------------------------
//
// Corpus offsets are character offsets (Unicode code points), not bytes.
// These helpers treat the input as UTF-8; invalid lead bytes advance one byte.

// Number of code points in `s`.
std::size_t utf8_length(std::string_view s);

// Byte offset of the code point at index `cp`. `cp` may equal utf8_length(s),
// in which case s.size() is returned.
std::size_t utf8_byte_offset(std::string_view s, std::size_t cp);

// Substring by code-point range [from, to).
std::string utf8_substr(std::string_view s, std::size_t from, std::size_t to);

// --- string utilities --------------------------------------------------------

std::string to_lower_ascii(std::string_view s);

// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

// Collapses every run of whitespace to a single space and trims the ends.
std::string collapse_whitespace(std::string_view s);

// Lowercase + whitespace collapse; the normal form used for aspect-term
// distinctness checks.
std::string normalize_term(std::string_view s);

// Case-insensitive (ASCII) substring search; npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t pos = 0);

// --- deterministic hashing ---------------------------------------------------

std::uint64_t fnv1a64(std::string_view bytes);

// SplitMix64 finalizer; good avalanche for bucketing hashed tokens.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace absaforge
