#include "absaforge/prompts.hpp"

#include "absaforge/errors.hpp"
#include "absaforge/text.hpp"

namespace absaforge {

namespace {

const ExemplarPair kLaptopExemplar = {
    "The speed is incredible and I am more than satisfied.",
    "The speed is extraordinary and I am more than content.",
    domain::laptop,
};

const ExemplarPair kRestaurantExemplar = {
    "The palak paneer was standard, and I was not a fan of the malai kofta.",
    "The palak paneer was mediocre, and I did not enjoy the creamy vegetable balls.",
    domain::restaurant,
};

// Strips one layer of matched surrounding quotes (ASCII or typographic).
bool strip_matched_quotes(std::string& s) {
    static const std::pair<std::string_view, std::string_view> pairs[] = {
        {"\"", "\""}, {"'", "'"}, {"`", "`"},
        {"“", "”"},  // U+201C / U+201D curly double quotes
        {"‘", "’"},  // U+2018 / U+2019 curly single quotes
    };
    for (const auto& [open, close] : pairs) {
        if (s.size() >= open.size() + close.size() && s.starts_with(open) && s.ends_with(close)) {
            s = s.substr(open.size(), s.size() - open.size() - close.size());
            return true;
        }
    }
    return false;
}

bool strip_trailing_punct(std::string& s) {
    bool changed = false;
    while (!s.empty()) {
        const char c = s.back();
        if (c == '.' || c == '!' || c == '?' || c == ',' || c == ';' || c == ':') {
            s.pop_back();
            changed = true;
        } else {
            break;
        }
    }
    return changed;
}

// Removes a leading "New aspect term:"-style label, once.
void strip_label(std::string& s) {
    static const std::string_view labels[] = {
        "new aspect term", "aspect term", "new aspect", "answer", "output",
    };
    const std::string lower = to_lower_ascii(s);
    for (std::string_view label : labels) {
        if (!lower.starts_with(label)) continue;
        std::size_t i = label.size();
        while (i < s.size() && s[i] == ' ') ++i;
        if (i < s.size() && (s[i] == ':' || s[i] == '-')) {
            ++i;
            while (i < s.size() && s[i] == ' ') ++i;
            s = s.substr(i);
            return;
        }
    }
}

}  // namespace

const std::vector<ExemplarPair>& default_exemplars(const std::string& domain) {
    // The published demonstrations cover one pair per domain; prompts need
    // two, so both pairs serve every domain with the matching one first.
    static const std::vector<ExemplarPair> laptop_first = {kLaptopExemplar, kRestaurantExemplar};
    static const std::vector<ExemplarPair> restaurant_first = {kRestaurantExemplar,
                                                               kLaptopExemplar};
    return domain == domain::laptop ? laptop_first : restaurant_first;
}

std::string build_cda_prompt(const Triplet& t, const std::vector<ExemplarPair>& exemplars) {
    if (exemplars.size() != 2)
        throw ConfigError("CDA prompt needs exactly 2 exemplar pairs, got " +
                          std::to_string(exemplars.size()));
    const std::string& s = t.sentence;
    const std::string a = "\"$" + t.aspect + "$\"";
    std::string out;
    out += "Given the sentence: \"" + s + "\", and given the aspect term " + a +
           " in above sentence.\n\n";
    out += "Please generate one new sentence using paraphrasing. The new sentence should not "
           "paraphrase the aspect term " + a + " and should keep the aspect term " + a +
           ", semantics of the sentence, and sentiment polarity towards the aspect term " + a +
           " unchanged.\n\n";
    out += "Here are a few examples:\n";
    for (const ExemplarPair& ex : exemplars)
        out += "Source sentence: " + ex.source_sentence + " → New sentence: " +
               ex.augmented_sentence + "\n";
    out += "\nPlease only output the New sentence.";
    return out;
}

std::string build_ada_prompt(const Triplet& t) {
    const std::string& s = t.sentence;
    const std::string a = "\"$" + t.aspect + "$\"";
    std::string out;
    out += "Given the sentence: \"" + s + "\", and given the aspect term " + a +
           " in above sentence.\n\n";
    out += "Please replace the given aspect term in the given sentence with a new semantically "
           "and logically suitable aspect term and also keep the sentiment polarity towards the "
           "new aspect term unchanged.\n\n";
    out += "Please only output the new aspect term.";
    return out;
}

std::string sanitize_aspect(std::string_view raw) {
    std::string s(trim(raw));
    strip_label(s);
    // Quote and punctuation layers can nest ("curry.", "'curry'."); peel
    // until nothing changes.
    for (;;) {
        s = std::string(trim(s));
        if (strip_matched_quotes(s)) continue;
        if (strip_trailing_punct(s)) continue;
        break;
    }
    s = collapse_whitespace(s);
    if (s.empty()) throw ValidationError("aspect term empty after sanitization");
    return s;
}

std::string substitute_aspect(std::string_view sentence, std::optional<std::pair<int, int>> span,
                              std::string_view old_aspect, std::string_view new_aspect) {
    if (span) {
        const auto [from, to] = *span;
        const auto n = static_cast<long>(utf8_length(sentence));
        if (from < 0 || to < from || to > n)
            throw ContractViolation("aspect span [" + std::to_string(from) + ", " +
                                    std::to_string(to) + ") out of range for sentence");
        const std::size_t b0 = utf8_byte_offset(sentence, static_cast<std::size_t>(from));
        const std::size_t b1 = utf8_byte_offset(sentence, static_cast<std::size_t>(to));
        std::string out(sentence.substr(0, b0));
        out.append(new_aspect);
        out.append(sentence.substr(b1));
        return out;
    }
    const std::size_t at = ifind(sentence, old_aspect);
    if (at == std::string_view::npos)
        throw ValidationError("aspect term '" + std::string(old_aspect) +
                              "' does not occur in the sentence");
    std::string out(sentence.substr(0, at));
    out.append(new_aspect);
    out.append(sentence.substr(at + old_aspect.size()));
    return out;
}

}  // namespace absaforge
