#include <doctest.h>

#include <algorithm>
#include <set>

#include "absaforge/errors.hpp"
#include "absaforge/mock_backend.hpp"
#include "absaforge/prompts.hpp"
#include "absaforge/text.hpp"

using namespace absaforge;

namespace {

Triplet make_triplet(std::string sentence, std::string aspect, const std::string& domain) {
    Triplet t;
    t.id = "m:0";
    t.sentence = std::move(sentence);
    t.aspect = std::move(aspect);
    t.domain = domain;
    return t;
}

PromptRequest wrap(std::string prompt) {
    PromptRequest req;
    req.messages.push_back({"user", std::move(prompt)});
    return req;
}

}  // namespace

TEST_CASE("paraphrase substitutes synonyms but keeps the aspect verbatim") {
    CHECK(mock_paraphrase("The speed is incredible and I am more than satisfied.", "speed") ==
          "The speed seems extraordinary plus I am far more than content.");
    CHECK(mock_paraphrase("The staff was nice and the service was good.", "staff") ==
          "The staff seemed lovely plus the service seemed pleasant.");
    // Capitalization carries over to the replacement's first letter.
    CHECK(mock_paraphrase("Not good at all.", "all") == "Hardly pleasant at all.");
    // Only the aspect's first occurrence is shielded.
    CHECK(mock_paraphrase("I like the fan and the fan.", "fan") ==
          "I enjoy the fan plus the admirer.");
}

TEST_CASE("cda-shaped prompts get a paraphrase with the aspect preserved") {
    MockBackend backend(7, "restaurant");
    const Triplet t = make_triplet("The pasta was great but the decor was bad.", "pasta",
                                   domain::restaurant);
    const auto req = wrap(build_cda_prompt(t, default_exemplars(t.domain)));
    const std::string reply = backend.complete(req, 0);
    CHECK(reply == "The pasta seemed superb yet the decor seemed dreadful.");
    CHECK(reply.find("pasta") != std::string::npos);
    CHECK(backend.complete(req, 0) == reply);
    CHECK(backend.complete(req, 3) == reply);  // paraphrase ignores the ordinal
}

TEST_CASE("ada-shaped prompts draw a distinct lexicon term") {
    MockBackend backend(7, "restaurant");
    const auto& lexicon = MockBackend::lexicon("restaurant");
    const Triplet t =
        make_triplet("The pasta was great.", "pasta", domain::restaurant);
    const auto req = wrap(build_ada_prompt(t));

    std::set<std::string> seen;
    for (int ordinal = 0; ordinal < 12; ++ordinal) {
        const std::string reply = backend.complete(req, ordinal);
        CHECK(std::find(lexicon.begin(), lexicon.end(), reply) != lexicon.end());
        CHECK(normalize_term(reply) != normalize_term(t.aspect));
        CHECK(backend.complete(req, ordinal) == reply);
        seen.insert(reply);
    }
    // The ordinal feeds the draw, so re-queries explore the lexicon.
    CHECK(seen.size() > 1);
}

TEST_CASE("replies are a pure function of seed, domain and prompt") {
    const Triplet t = make_triplet("The screen is good.", "screen", domain::laptop);
    const auto req = wrap(build_ada_prompt(t));

    MockBackend a(1, "laptop"), b(1, "laptop"), c(2, "laptop");
    CHECK(a.complete(req, 0) == b.complete(req, 0));
    CHECK(a.id() == b.id());
    CHECK(a.id() != c.id());

    const Triplet other = make_triplet("The display is good.", "display", domain::laptop);
    const auto other_req = wrap(build_ada_prompt(other));
    // Different prompts hash to independent draws.
    const std::string r1 = a.complete(req, 0);
    const std::string r2 = a.complete(other_req, 0);
    CHECK(normalize_term(r1) != "screen");
    CHECK(normalize_term(r2) != "display");
}

TEST_CASE("scripted ordinal threshold repeats the original term first") {
    MockScript script;
    script.repeat_original_first_k = 2;
    MockBackend backend(7, "restaurant", script);
    const Triplet t = make_triplet("The pasta was great.", "pasta", domain::restaurant);
    const auto req = wrap(build_ada_prompt(t));
    CHECK(backend.complete(req, 0) == "pasta");
    CHECK(backend.complete(req, 1) == "pasta");
    CHECK(backend.complete(req, 2) != "pasta");
}

TEST_CASE("scripted aspect dropping removes the term from the paraphrase") {
    MockScript script;
    script.cda_drop_aspect = true;
    MockBackend backend(7, "restaurant", script);
    const Triplet t = make_triplet("The pasta was great.", "pasta", domain::restaurant);
    const std::string reply =
        backend.complete(wrap(build_cda_prompt(t, default_exemplars(t.domain))), 0);
    CHECK(reply.find("pasta") == std::string::npos);
}

TEST_CASE("scripted exact replies override the rules") {
    MockScript script;
    script.cda_reply_by_sentence["The pasta was great."] = "A wholly scripted paraphrase.";
    script.ada_reply_by_sentence["The pasta was great."] = "gnocchi";
    MockBackend backend(7, "restaurant", script);
    const Triplet t = make_triplet("The pasta was great.", "pasta", domain::restaurant);
    CHECK(backend.complete(wrap(build_cda_prompt(t, default_exemplars(t.domain))), 0) ==
          "A wholly scripted paraphrase.");
    CHECK(backend.complete(wrap(build_ada_prompt(t)), 0) == "gnocchi");
    CHECK(backend.complete(wrap(build_ada_prompt(t)), 5) == "gnocchi");

    // Other sentences still follow the rule-based behavior.
    const Triplet other = make_triplet("The wine was great.", "wine", domain::restaurant);
    CHECK(backend.complete(wrap(build_cda_prompt(other, default_exemplars(other.domain))), 0) ==
          "The wine seemed superb.");
}

TEST_CASE("per-domain lexicons") {
    const auto& restaurant = MockBackend::lexicon("restaurant");
    CHECK(restaurant.size() == 10);
    CHECK(std::find(restaurant.begin(), restaurant.end(), "curry") != restaurant.end());
    const auto& laptop = MockBackend::lexicon("laptop");
    CHECK(std::find(laptop.begin(), laptop.end(), "performance") != laptop.end());
    CHECK(MockBackend::lexicon("hotel") == MockBackend::lexicon("unknown"));
    CHECK(MockBackend::lexicon("hotel") != restaurant);
}

TEST_CASE("unrecognized prompt shapes are rejected") {
    MockBackend backend(7, "restaurant");
    CHECK_THROWS_AS(backend.complete(wrap("What is the capital of France?"), 0),
                    ValidationError);
}
