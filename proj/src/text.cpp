#include "absaforge/text.hpp"

#include <cctype>

namespace absaforge {

namespace {

// Length in bytes of the UTF-8 sequence starting at lead byte `b`.
std::size_t seq_len(unsigned char b) {
    if (b < 0x80) return 1;
    if ((b & 0xE0) == 0xC0) return 2;
    if ((b & 0xF0) == 0xE0) return 3;
    if ((b & 0xF8) == 0xF0) return 4;
    return 1;  // invalid lead byte; treat as a single unit
}

bool is_space(unsigned char c) { return std::isspace(c) != 0; }

}  // namespace

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); i += seq_len(static_cast<unsigned char>(s[i]))) ++n;
    return n;
}

std::size_t utf8_byte_offset(std::string_view s, std::size_t cp) {
    std::size_t i = 0;
    for (std::size_t seen = 0; seen < cp && i < s.size(); ++seen)
        i += seq_len(static_cast<unsigned char>(s[i]));
    return i;
}

std::string utf8_substr(std::string_view s, std::size_t from, std::size_t to) {
    if (to < from) to = from;
    const std::size_t b0 = utf8_byte_offset(s, from);
    const std::size_t b1 = utf8_byte_offset(s, to);
    return std::string(s.substr(b0, b1 - b0));
}

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_ws = false;
    for (char c : trim(s)) {
        if (is_space(static_cast<unsigned char>(c))) {
            in_ws = true;
            continue;
        }
        if (in_ws && !out.empty()) out.push_back(' ');
        in_ws = false;
        out.push_back(c);
    }
    return out;
}

std::string normalize_term(std::string_view s) {
    return collapse_whitespace(to_lower_ascii(s));
}

std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t pos) {
    if (needle.empty()) return pos <= haystack.size() ? pos : std::string_view::npos;
    if (needle.size() > haystack.size()) return std::string_view::npos;
    auto lower = [](char c) { return std::tolower(static_cast<unsigned char>(c)); };
    for (std::size_t i = pos; i + needle.size() <= haystack.size(); ++i) {
        std::size_t j = 0;
        while (j < needle.size() && lower(haystack[i + j]) == lower(needle[j])) ++j;
        if (j == needle.size()) return i;
    }
    return std::string_view::npos;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace absaforge
