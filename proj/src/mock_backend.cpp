#include "absaforge/mock_backend.hpp"

#include <cctype>
#include <unordered_map>

#include "absaforge/errors.hpp"
#include "absaforge/text.hpp"

namespace absaforge {

namespace {

const std::unordered_map<std::string, std::string>& synonym_table() {
    static const std::unordered_map<std::string, std::string> table = {
        {"incredible", "extraordinary"}, {"satisfied", "content"},
        {"standard", "mediocre"},        {"good", "pleasant"},
        {"great", "superb"},             {"bad", "dreadful"},
        {"terrible", "dire"},            {"nice", "lovely"},
        {"amazing", "astounding"},       {"awful", "appalling"},
        {"is", "seems"},                 {"was", "seemed"},
        {"are", "appear"},               {"were", "appeared"},
        {"and", "plus"},                 {"but", "yet"},
        {"very", "really"},              {"more", "far more"},
        {"not", "hardly"},               {"like", "enjoy"},
        {"love", "adore"},               {"hate", "despise"},
        {"think", "believe"},            {"fan", "admirer"},
    };
    return table;
}

const std::vector<std::string>& laptop_lexicon() {
    static const std::vector<std::string> terms = {
        "performance", "screen", "battery life", "keyboard", "trackpad",
        "display",     "speaker", "processor",    "design",   "storage",
    };
    return terms;
}

const std::vector<std::string>& restaurant_lexicon() {
    static const std::vector<std::string> terms = {
        "curry", "pasta", "service", "dessert", "ambience",
        "pizza", "staff", "wine",    "decor",   "portions",
    };
    return terms;
}

const std::vector<std::string>& generic_lexicon() {
    static const std::vector<std::string> terms = {
        "quality", "design", "value", "experience", "style",
        "layout",  "finish", "feel",  "detail",     "feature",
    };
    return terms;
}

// Shape markers produced by the prompt builders.
constexpr std::string_view kCdaClosing = "Please only output the New sentence.";
constexpr std::string_view kAdaClosing = "Please only output the new aspect term.";

// The mock pairs with this project's prompt templates; it pulls the raw
// sentence and aspect back out of the rendered prompt text.
struct PromptFields {
    std::string sentence;
    std::string aspect;
};

PromptFields extract_fields(const std::string& prompt) {
    constexpr std::string_view s_open = "Given the sentence: \"";
    constexpr std::string_view s_close = "\", and given the aspect term \"$";
    constexpr std::string_view a_close = "$\"";
    const auto s_begin = prompt.find(s_open);
    const auto s_end = s_begin == std::string::npos
                           ? std::string::npos
                           : prompt.find(s_close, s_begin + s_open.size());
    if (s_end == std::string::npos)
        throw ValidationError("mock backend: prompt does not carry a recognizable sentence");
    const auto a_begin = s_end + s_close.size();
    const auto a_end = prompt.find(a_close, a_begin);
    if (a_end == std::string::npos)
        throw ValidationError("mock backend: prompt does not carry a recognizable aspect term");
    return {prompt.substr(s_begin + s_open.size(), s_end - s_begin - s_open.size()),
            prompt.substr(a_begin, a_end - a_begin)};
}

std::string substitute_words(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
            out.push_back(text[i++]);
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
        const std::string word(text.substr(i, j - i));
        const auto it = synonym_table().find(to_lower_ascii(word));
        if (it == synonym_table().end()) {
            out.append(word);
        } else {
            std::string repl = it->second;
            if (std::isupper(static_cast<unsigned char>(word[0])))
                repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
            out.append(repl);
        }
        i = j;
    }
    return out;
}

}  // namespace

std::string mock_paraphrase(const std::string& sentence, const std::string& aspect) {
    const std::size_t at = ifind(sentence, aspect);
    if (at == std::string::npos) return substitute_words(sentence);
    return substitute_words(std::string_view(sentence).substr(0, at)) +
           sentence.substr(at, aspect.size()) +
           substitute_words(std::string_view(sentence).substr(at + aspect.size()));
}

MockBackend::MockBackend(std::uint64_t seed, std::string domain, MockScript script)
    : seed_(seed), domain_(std::move(domain)), script_(std::move(script)) {}

std::string MockBackend::id() const {
    return "mock:" + std::to_string(seed_) + ":" + domain_;
}

const std::vector<std::string>& MockBackend::lexicon(const std::string& domain) {
    if (domain == "laptop") return laptop_lexicon();
    if (domain == "restaurant") return restaurant_lexicon();
    return generic_lexicon();
}

std::string MockBackend::complete(const PromptRequest& req, int ordinal) {
    const std::string& prompt = req.messages.back().content;
    const PromptFields fields = extract_fields(prompt);

    if (prompt.find(kCdaClosing) != std::string::npos) {
        if (auto it = script_.cda_reply_by_sentence.find(fields.sentence);
            it != script_.cda_reply_by_sentence.end())
            return it->second;
        std::string reply = mock_paraphrase(fields.sentence, fields.aspect);
        if (script_.cda_drop_aspect) {
            const std::size_t at = ifind(reply, fields.aspect);
            if (at != std::string::npos) reply.erase(at, fields.aspect.size());
        }
        return reply;
    }

    if (prompt.find(kAdaClosing) != std::string::npos) {
        if (ordinal < script_.repeat_original_first_k) return fields.aspect;
        if (auto it = script_.ada_reply_by_sentence.find(fields.sentence);
            it != script_.ada_reply_by_sentence.end())
            return it->second;
        const auto& terms = lexicon(domain_);
        const std::uint64_t h = splitmix64(
            seed_ ^ splitmix64(fnv1a64(fields.sentence) + fnv1a64(fields.aspect)) ^
            (static_cast<std::uint64_t>(ordinal) * 0x9e3779b97f4a7c15ULL));
        std::size_t idx = static_cast<std::size_t>(h % terms.size());
        // A reply equal to the original term is only produced when scripted.
        const std::string wanted = normalize_term(fields.aspect);
        for (std::size_t step = 0; step < terms.size(); ++step) {
            const auto& candidate = terms[(idx + step) % terms.size()];
            if (normalize_term(candidate) != wanted) return candidate;
        }
        return terms[idx];
    }

    throw ValidationError("mock backend: prompt shape not recognized");
}

}  // namespace absaforge
