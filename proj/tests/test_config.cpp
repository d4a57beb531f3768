#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <string>

#include "absaforge/config.hpp"
#include "absaforge/errors.hpp"

using namespace absaforge;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "absaforge-config-test";
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        const auto p = path / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p;
    }
};

void check_config_error_names(const std::string& content, const std::string& needle) {
    TempDir tmp;
    const auto p = tmp.write("cfg.json", content);
    try {
        load_run_config(p);
        FAIL("expected ConfigError for: " << content);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

}  // namespace

TEST_CASE("per-strategy alpha/beta defaults match the published table") {
    const auto cda = default_alpha_beta({StrategyKind::CDA, false});
    CHECK(cda.alpha == 0.2);
    CHECK(cda.beta == 0.2);
    // CDA has no verification variant; the flag changes nothing
    const auto cda_v = default_alpha_beta({StrategyKind::CDA, true});
    CHECK(cda_v.alpha == 0.2);
    CHECK(cda_v.beta == 0.2);

    const auto ada = default_alpha_beta({StrategyKind::ADA, false});
    CHECK(ada.alpha == 0.6);
    CHECK(ada.beta == 0.5);
    const auto ada_v = default_alpha_beta({StrategyKind::ADA, true});
    CHECK(ada_v.alpha == 0.1);
    CHECK(ada_v.beta == 0.2);

    const auto cada = default_alpha_beta({StrategyKind::CADA, false});
    CHECK(cada.alpha == 0.2);
    CHECK(cada.beta == 0.4);
    const auto cada_v = default_alpha_beta({StrategyKind::CADA, true});
    CHECK(cada_v.alpha == 0.4);
    CHECK(cada_v.beta == 0.6);
}

TEST_CASE("alpha/beta resolution prefers CLI over file over defaults per field") {
    const Strategy s{StrategyKind::ADA, false};  // defaults 0.6 / 0.5

    SUBCASE("nothing set: defaults") {
        const auto r = resolve_alpha_beta(s, {}, {});
        CHECK(r.alpha == 0.6);
        CHECK(r.beta == 0.5);
    }
    SUBCASE("file sets alpha only") {
        const auto r = resolve_alpha_beta(s, {0.33, std::nullopt}, {});
        CHECK(r.alpha == 0.33);
        CHECK(r.beta == 0.5);
    }
    SUBCASE("cli beats file where both speak") {
        const auto r = resolve_alpha_beta(s, {0.33, 0.44}, {0.11, std::nullopt});
        CHECK(r.alpha == 0.11);
        CHECK(r.beta == 0.44);
    }
    SUBCASE("cli alone") {
        const auto r = resolve_alpha_beta(s, {}, {std::nullopt, 0.9});
        CHECK(r.alpha == 0.6);
        CHECK(r.beta == 0.9);
    }
}

TEST_CASE("an empty config file yields the documented defaults") {
    TempDir tmp;
    const RunConfig cfg = load_run_config(tmp.write("empty.json", "{}"));
    CHECK(cfg.backend == "mock");
    CHECK(cfg.domain == "restaurant");
    CHECK(cfg.strategy.kind == StrategyKind::CDA);
    CHECK_FALSE(cfg.strategy.verify);
    CHECK_FALSE(cfg.file_strategy_set);
    CHECK_FALSE(cfg.file_verify_set);
    CHECK_FALSE(cfg.file_alpha_beta.alpha.has_value());
    CHECK_FALSE(cfg.file_alpha_beta.beta.has_value());
    CHECK(cfg.triplets == "triplets.jsonl");
    CHECK(cfg.cache == "gateway_cache.jsonl");
    CHECK(cfg.encoder.kind == "hash");
    CHECK(cfg.encoder.dim == 256);
    CHECK(cfg.workers == 1);
    CHECK(cfg.seed == 42);
}

TEST_CASE("config files set fields and record which ones they touched") {
    TempDir tmp;
    const auto p = tmp.write("full.json", R"({
        "seed": 7,
        "backend": "openai",
        "endpoint": "http://127.0.0.1:9999/v1",
        "domain": "laptop",
        "strategy": "CaDa",
        "verify": true,
        "workers": 3,
        "paths": {"triplets": "a.jsonl", "metrics": "m.json"},
        "augment": {"max_verify_retries": 9, "model": "gpt-x"},
        "hyperparams": {"alpha": 0.9, "tau": 0.25, "batch_size": 8},
        "encoder": {"kind": "remote", "dim": 12, "endpoint": "http://e", "model": "emb"},
        "train": {"projection_dim": 20, "holdout_fraction": 0.3},
        "exemplars": {"laptop": [
            {"source": "s1", "augmented": "a1"},
            {"source": "s2", "augmented": "a2"}
        ]}
    })");
    const RunConfig cfg = load_run_config(p);
    CHECK(cfg.seed == 7);
    CHECK(cfg.backend == "openai");
    CHECK(cfg.endpoint == "http://127.0.0.1:9999/v1");
    CHECK(cfg.domain == "laptop");
    CHECK(cfg.strategy.kind == StrategyKind::CADA);
    CHECK(cfg.strategy.verify);
    CHECK(cfg.file_strategy_set);
    CHECK(cfg.file_verify_set);
    CHECK(cfg.workers == 3);
    CHECK(cfg.triplets == "a.jsonl");
    CHECK(cfg.metrics == "m.json");
    CHECK(cfg.augmented == "augmented.jsonl");  // untouched key keeps its default
    CHECK(cfg.augment.max_verify_retries == 9);
    CHECK(cfg.augment.model == "gpt-x");
    REQUIRE(cfg.file_alpha_beta.alpha.has_value());
    CHECK(*cfg.file_alpha_beta.alpha == 0.9);
    CHECK_FALSE(cfg.file_alpha_beta.beta.has_value());
    CHECK(cfg.hp.tau == 0.25);
    CHECK(cfg.hp.batch_size == 8);
    CHECK(cfg.encoder.kind == "remote");
    CHECK(cfg.encoder.dim == 12);
    CHECK(cfg.encoder.endpoint == "http://e");
    CHECK(cfg.projection_dim == 20);
    CHECK(cfg.holdout_fraction == 0.3);
    REQUIRE(cfg.exemplars.by_domain.count("laptop") == 1);
    const auto& pairs = cfg.exemplars.by_domain.at("laptop");
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].source_sentence == "s1");
    CHECK(pairs[1].augmented_sentence == "a2");
    CHECK(pairs[0].domain == "laptop");
}

TEST_CASE("unknown keys are ignored, bad values are named") {
    TempDir tmp;
    CHECK_NOTHROW(load_run_config(tmp.write("extra.json", R"({"future_knob": 1})")));

    check_config_error_names(R"({"workers": "three"})", "workers");
    check_config_error_names(R"({"hyperparams": {"alpha": "big"}})", "alpha");
    check_config_error_names(R"({"backend": "azure"})", "backend");
    check_config_error_names(R"({"domain": "hotel"})", "domain");
    check_config_error_names(R"({"strategy": "xda"})", "xda");
    check_config_error_names(R"({"strategy": 3})", "strategy");
    check_config_error_names(R"({"encoder": {"kind": "bert"}})", "kind");
    check_config_error_names(R"({"paths": []})", "paths");
    check_config_error_names(R"({"exemplars": {"hotel": []}})", "hotel");
    check_config_error_names(R"({"exemplars": {"laptop": [{"source": "s"}]}})", "augmented");
    check_config_error_names("{not json", "invalid JSON");
    check_config_error_names(R"([1, 2])", "object");
}

TEST_CASE("missing config file is a config error naming the path") {
    try {
        load_run_config("/nonexistent/absaforge.json");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("/nonexistent/absaforge.json") != std::string::npos);
    }
}

TEST_CASE("the effective config dump reloads to the same settings") {
    TempDir tmp;
    RunConfig cfg = load_run_config(tmp.write("base.json", R"({
        "domain": "laptop",
        "strategy": "ada",
        "verify": true,
        "hyperparams": {"tau": 0.3},
        "exemplars": {"restaurant": [{"source": "s", "augmented": "a"}]}
    })"));
    const AlphaBeta ab = resolve_alpha_beta(cfg.strategy, cfg.file_alpha_beta, {});
    cfg.hp.alpha = ab.alpha;
    cfg.hp.beta = ab.beta;

    const nlohmann::ordered_json doc = effective_config_json(cfg);
    CHECK(doc["strategy"] == "ADA");
    CHECK(doc["verify"] == true);
    CHECK(doc["hyperparams"]["alpha"] == 0.1);
    CHECK(doc["hyperparams"]["beta"] == 0.2);
    CHECK(doc["hyperparams"]["tau"] == 0.3);
    CHECK(doc["domain"] == "laptop");

    const RunConfig back = load_run_config(tmp.write("eff.json", doc.dump(2)));
    CHECK(back.domain == cfg.domain);
    CHECK(back.strategy.kind == cfg.strategy.kind);
    CHECK(back.strategy.verify == cfg.strategy.verify);
    CHECK(back.hp.tau == cfg.hp.tau);
    REQUIRE(back.file_alpha_beta.alpha.has_value());
    CHECK(*back.file_alpha_beta.alpha == 0.1);
    CHECK(back.exemplars.by_domain.at("restaurant").size() == 1);
}
