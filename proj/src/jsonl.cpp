#include "absaforge/jsonl.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "absaforge/errors.hpp"

namespace absaforge {

using json = nlohmann::json;

namespace {

json to_json(const Triplet& t) {
    return {
        {"id", t.id},
        {"sentence", t.sentence},
        {"aspect", t.aspect},
        {"aspect_from", t.aspect_from},
        {"aspect_to", t.aspect_to},
        {"polarity", static_cast<int>(t.polarity)},
        {"domain", t.domain},
    };
}

json to_json(const AugmentedSample& s) {
    return {
        {"source_id", s.source_id},
        {"aug_sentence", s.aug_sentence},
        {"aug_aspect", s.aug_aspect},
        {"polarity", static_cast<int>(s.polarity)},
        {"strategy", std::string(strategy_name(s.strategy.kind))},
        {"verify", s.strategy.verify},
        {"retries_used", s.retries_used},
        {"verified_distinct", s.verified_distinct},
        {"fallback", s.fallback},
    };
}

[[noreturn]] void field_error(long line_no, const std::string& field, const char* what) {
    throw SchemaError("line " + std::to_string(line_no) + ": " + what + " field '" + field + "'");
}

template <typename T>
T require(const json& obj, const std::string& field, long line_no) {
    const auto it = obj.find(field);
    if (it == obj.end()) field_error(line_no, field, "missing");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        field_error(line_no, field, "wrong type for");
    }
}

Triplet triplet_from_json(const json& obj, long line_no) {
    Triplet t;
    t.id = require<std::string>(obj, "id", line_no);
    t.sentence = require<std::string>(obj, "sentence", line_no);
    t.aspect = require<std::string>(obj, "aspect", line_no);
    t.aspect_from = require<int>(obj, "aspect_from", line_no);
    t.aspect_to = require<int>(obj, "aspect_to", line_no);
    try {
        t.polarity = polarity_from_int(require<int>(obj, "polarity", line_no));
    } catch (const SchemaError& e) {
        throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
    t.domain = require<std::string>(obj, "domain", line_no);
    return t;
}

AugmentedSample augmented_from_json(const json& obj, long line_no) {
    AugmentedSample s;
    s.source_id = require<std::string>(obj, "source_id", line_no);
    s.aug_sentence = require<std::string>(obj, "aug_sentence", line_no);
    s.aug_aspect = require<std::string>(obj, "aug_aspect", line_no);
    try {
        s.polarity = polarity_from_int(require<int>(obj, "polarity", line_no));
        s.strategy.kind = strategy_from_name(require<std::string>(obj, "strategy", line_no));
    } catch (const SchemaError& e) {
        throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ConfigError& e) {
        throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
    s.strategy.verify = require<bool>(obj, "verify", line_no);
    s.retries_used = require<int>(obj, "retries_used", line_no);
    s.verified_distinct = require<bool>(obj, "verified_distinct", line_no);
    s.fallback = require<bool>(obj, "fallback", line_no);
    return s;
}

template <typename T>
void write_lines(const std::vector<T>& items, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open for writing: " + path.string());
    for (const T& item : items) out << to_json(item).dump() << '\n';
    out.flush();
    if (!out) throw Error("write failed: " + path.string());
}

template <typename T, typename FromJson>
std::vector<T> read_lines(const std::filesystem::path& path, FromJson from_json_fn) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open for reading: " + path.string());
    std::vector<T> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (obj.is_discarded() || !obj.is_object())
            throw SchemaError("line " + std::to_string(line_no) + ": not a JSON object");
        out.push_back(from_json_fn(obj, line_no));
    }
    return out;
}

}  // namespace

void write_jsonl(const std::vector<Triplet>& items, const std::filesystem::path& path) {
    write_lines(items, path);
}

void write_jsonl(const std::vector<AugmentedSample>& items, const std::filesystem::path& path) {
    write_lines(items, path);
}

std::vector<Triplet> read_triplets_jsonl(const std::filesystem::path& path) {
    return read_lines<Triplet>(path, triplet_from_json);
}

std::vector<AugmentedSample> read_augmented_jsonl(const std::filesystem::path& path) {
    return read_lines<AugmentedSample>(path, augmented_from_json);
}

}  // namespace absaforge
