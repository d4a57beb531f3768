#include "absaforge/corpus.hpp"

#include <optional>

#include "absaforge/errors.hpp"
#include "absaforge/text.hpp"
#include "absaforge/xml.hpp"

namespace absaforge {

int class_index(Polarity p) { return static_cast<int>(p) + 1; }

Polarity polarity_from_index(int idx) {
    if (idx < 0 || idx >= kNumClasses)
        throw ContractViolation("class index out of range: " + std::to_string(idx));
    return static_cast<Polarity>(idx - 1);
}

Polarity polarity_from_int(int value) {
    if (value < -1 || value > 1)
        throw SchemaError("polarity must be -1, 0 or 1; got " + std::to_string(value));
    return static_cast<Polarity>(value);
}

std::string_view split_name(Split s) { return s == Split::train ? "train" : "test"; }

namespace {

std::optional<Polarity> polarity_from_label(std::string_view label) {
    if (label == "positive") return Polarity::positive;
    if (label == "neutral") return Polarity::neutral;
    if (label == "negative") return Polarity::negative;
    return std::nullopt;  // includes "conflict"
}

long parse_offset(const std::string& value, const std::string& sentence_id, const char* what) {
    try {
        std::size_t used = 0;
        long v = std::stol(value, &used);
        if (used != value.size() || v < 0) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw SchemaError("sentence " + sentence_id + ": bad '" + what + "' offset '" + value + "'");
    }
}

}  // namespace

std::vector<Triplet> parse_semeval_xml(std::string_view xml, const std::string& domain,
                                       ParseReport& report) {
    const XmlNode root = parse_xml(xml);
    // Accept either <sentences> as root or a wrapper element that contains it.
    const XmlNode* sentences = root.name == "sentences" ? &root : root.child("sentences");
    if (!sentences)
        throw ParseError("expected a <sentences> element", root.line, root.column);

    std::vector<Triplet> out;
    for (const XmlNode* sentence : sentences->children_named("sentence")) {
        ++report.sentences;
        const std::string* sid = sentence->attribute("id");
        const std::string sentence_id = sid ? *sid : std::to_string(report.sentences);
        const XmlNode* text_node = sentence->child("text");
        if (!text_node) {
            ++report.invalid_skipped;
            report.invalid_ids.push_back(sentence_id);
            continue;
        }
        const std::string& text = text_node->text;
        const XmlNode* terms = sentence->child("aspectTerms");
        if (!terms) continue;  // sentences without aspect terms yield nothing

        int aspect_index = 0;
        for (const XmlNode* term_node : terms->children_named("aspectTerm")) {
            ++report.aspect_terms;
            const int this_index = aspect_index++;
            const std::string* term = term_node->attribute("term");
            const std::string* label = term_node->attribute("polarity");
            const std::string* from_attr = term_node->attribute("from");
            const std::string* to_attr = term_node->attribute("to");
            if (!term || !label || !from_attr || !to_attr || term->empty() || text.empty()) {
                ++report.invalid_skipped;
                report.invalid_ids.push_back(sentence_id);
                continue;
            }
            const auto polarity = polarity_from_label(*label);
            if (!polarity) {
                if (*label == "conflict") {
                    ++report.conflict_skipped;
                } else {
                    ++report.invalid_skipped;
                    report.invalid_ids.push_back(sentence_id);
                }
                continue;
            }
            long from = 0, to = 0;
            try {
                from = parse_offset(*from_attr, sentence_id, "from");
                to = parse_offset(*to_attr, sentence_id, "to");
            } catch (const SchemaError&) {
                ++report.invalid_skipped;
                report.invalid_ids.push_back(sentence_id);
                continue;
            }
            // Offset invariant: the span must spell the term, modulo whitespace runs.
            const auto n_chars = static_cast<long>(utf8_length(text));
            if (to <= from || to > n_chars ||
                collapse_whitespace(utf8_substr(text, static_cast<std::size_t>(from),
                                                static_cast<std::size_t>(to))) !=
                    collapse_whitespace(*term)) {
                ++report.invalid_skipped;
                report.invalid_ids.push_back(sentence_id);
                continue;
            }

            Triplet t;
            t.id = sentence_id + ":" + std::to_string(this_index);
            t.sentence = text;
            t.aspect = *term;
            t.aspect_from = static_cast<int>(from);
            t.aspect_to = static_cast<int>(to);
            t.polarity = *polarity;
            t.domain = domain;
            out.push_back(std::move(t));
        }
    }
    return out;
}

std::vector<Triplet> parse_semeval_xml(std::string_view xml, const std::string& domain) {
    ParseReport report;
    return parse_semeval_xml(xml, domain, report);
}

CorpusStats compute_stats(const std::vector<Triplet>& triplets, Split split) {
    CorpusStats stats;
    stats.split = split;
    for (const Triplet& t : triplets) ++stats.counts[class_index(t.polarity)];
    return stats;
}

}  // namespace absaforge
