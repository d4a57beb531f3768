#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>

#include "absaforge/augment.hpp"
#include "absaforge/encoder.hpp"
#include "absaforge/train.hpp"

namespace absaforge {

struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
};

// Published per-strategy defaults; the verification variants of ADA and CADA
// carry their own rows. CDA has no verification variant, so its row applies
// either way.
AlphaBeta default_alpha_beta(const Strategy& s);

// What one source (config file, or CLI flags) said about alpha/beta.
struct AlphaBetaOverride {
    std::optional<double> alpha;
    std::optional<double> beta;
};

// Per-field precedence: CLI flag > config file > strategy default.
AlphaBeta resolve_alpha_beta(const Strategy& s, const AlphaBetaOverride& file,
                             const AlphaBetaOverride& cli);

// Everything a pipeline command needs, merged from the config file before CLI
// flags are applied on top.
struct RunConfig {
    // artifact paths
    std::string corpus_xml;
    std::string triplets = "triplets.jsonl";
    std::string augmented = "augmented.jsonl";
    std::string test;  // triplet JSONL evaluated by `eval`
    std::string cache = "gateway_cache.jsonl";
    std::string checkpoint = "checkpoint.json";
    std::string epoch_log = "epochs.jsonl";
    std::string metrics = "metrics.json";
    std::string sweep_csv = "sweep.csv";
    std::string augment_report = "augment_report.json";

    std::string backend = "mock";  // "mock" or "openai"
    std::string endpoint;          // base URL override for the openai backend
    std::string domain = domain::restaurant;

    Strategy strategy;
    bool file_strategy_set = false;  // whether the file named a strategy
    bool file_verify_set = false;
    AugmentOptions augment;
    Hyperparams hp;  // alpha/beta here are only meaningful after resolution
    AlphaBetaOverride file_alpha_beta;  // what the file explicitly set
    EncoderSpec encoder;
    ExemplarConfig exemplars;
    int projection_dim = 64;
    double holdout_fraction = 0.1;
    int workers = 1;
    std::uint64_t seed = 42;
    bool verbose = false;
};

// Parses the JSON config file. Unknown keys are ignored; type mismatches and
// invalid enum values raise ConfigError naming the key.
RunConfig load_run_config(const std::filesystem::path& path);

// The fully resolved configuration, for --print-effective-config.
nlohmann::ordered_json effective_config_json(const RunConfig& cfg);

}  // namespace absaforge
