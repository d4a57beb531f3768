#include <doctest.h>

#include "absaforge/text.hpp"

using namespace absaforge;

TEST_CASE("utf8 code point helpers") {
    CHECK(utf8_length("") == 0);
    CHECK(utf8_length("abc") == 3);
    CHECK(utf8_length("crème brûlée") == 12);  // two-byte accents count once
    CHECK(utf8_length("a\xF0\x9F\x99\x82z") == 3);  // 4-byte emoji

    CHECK(utf8_byte_offset("crème", 0) == 0);
    CHECK(utf8_byte_offset("crème", 2) == 2);  // è starts here
    CHECK(utf8_byte_offset("crème", 3) == 4);  // past the 2-byte è
    CHECK(utf8_byte_offset("crème", 5) == 6);  // == byte size at cp length

    CHECK(utf8_substr("The crème brûlée was divine.", 4, 16) == "crème brûlée");
    CHECK(utf8_substr("abc", 1, 1) == "");
    CHECK(utf8_substr("abc", 0, 3) == "abc");
}

TEST_CASE("trim and collapse") {
    CHECK(trim("  a b  ") == "a b");
    CHECK(trim("\t\n x \r ") == "x");
    CHECK(trim("") == "");
    CHECK(collapse_whitespace("  a\t\tb \n c ") == "a b c");
    CHECK(collapse_whitespace("one") == "one");
    CHECK(collapse_whitespace("   ") == "");
}

TEST_CASE("normalize_term is the distinctness normal form") {
    CHECK(normalize_term("Battery Life") == "battery life");
    CHECK(normalize_term("  battery   LIFE \n") == "battery life");
    CHECK(normalize_term("food") != normalize_term("service"));
}

TEST_CASE("case-insensitive find") {
    CHECK(ifind("The Battery Life", "battery life") == 4);
    CHECK(ifind("abc", "z") == std::string_view::npos);
    CHECK(ifind("aaa", "a", 1) == 1);
    CHECK(ifind("Pasta pasta", "PASTA", 1) == 6);
}

TEST_CASE("hashing is stable across calls") {
    CHECK(fnv1a64("hello") == fnv1a64("hello"));
    CHECK(fnv1a64("hello") != fnv1a64("hellp"));
    // published FNV-1a test vector
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(splitmix64(1) == splitmix64(1));
    CHECK(splitmix64(1) != splitmix64(2));
}
