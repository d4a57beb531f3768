#include "absaforge/config.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "absaforge/errors.hpp"

namespace absaforge {

using json = nlohmann::ordered_json;

AlphaBeta default_alpha_beta(const Strategy& s) {
    switch (s.kind) {
        case StrategyKind::CDA:
            return {0.2, 0.2};
        case StrategyKind::ADA:
            return s.verify ? AlphaBeta{0.1, 0.2} : AlphaBeta{0.6, 0.5};
        case StrategyKind::CADA:
            return s.verify ? AlphaBeta{0.4, 0.6} : AlphaBeta{0.2, 0.4};
    }
    throw ContractViolation("default_alpha_beta: unknown strategy");
}

AlphaBeta resolve_alpha_beta(const Strategy& s, const AlphaBetaOverride& file,
                             const AlphaBetaOverride& cli) {
    AlphaBeta out = default_alpha_beta(s);
    if (file.alpha) out.alpha = *file.alpha;
    if (file.beta) out.beta = *file.beta;
    if (cli.alpha) out.alpha = *cli.alpha;
    if (cli.beta) out.beta = *cli.beta;
    return out;
}

namespace {

template <typename T>
T get_typed(const json& obj, const std::string& key, const T& fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: wrong type for key '" + key + "'");
    }
}

std::string get_domain(const json& obj, const std::string& key, const std::string& fallback) {
    std::string v = get_typed<std::string>(obj, key, fallback);
    if (v != domain::restaurant && v != domain::laptop)
        throw ConfigError("config: key '" + key + "' must be \"restaurant\" or \"laptop\"");
    return v;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config: invalid JSON in " + path.string());
    if (!doc.is_object()) throw ConfigError("config: top level must be a JSON object");

    RunConfig cfg;
    if (doc.contains("paths")) {
        const json& p = doc["paths"];
        if (!p.is_object()) throw ConfigError("config: 'paths' must be an object");
        cfg.corpus_xml = get_typed<std::string>(p, "corpus_xml", cfg.corpus_xml);
        cfg.triplets = get_typed<std::string>(p, "triplets", cfg.triplets);
        cfg.augmented = get_typed<std::string>(p, "augmented", cfg.augmented);
        cfg.test = get_typed<std::string>(p, "test", cfg.test);
        cfg.cache = get_typed<std::string>(p, "cache", cfg.cache);
        cfg.checkpoint = get_typed<std::string>(p, "checkpoint", cfg.checkpoint);
        cfg.epoch_log = get_typed<std::string>(p, "epoch_log", cfg.epoch_log);
        cfg.metrics = get_typed<std::string>(p, "metrics", cfg.metrics);
        cfg.sweep_csv = get_typed<std::string>(p, "sweep_csv", cfg.sweep_csv);
        cfg.augment_report = get_typed<std::string>(p, "augment_report", cfg.augment_report);
    }

    cfg.backend = get_typed<std::string>(doc, "backend", cfg.backend);
    if (cfg.backend != "mock" && cfg.backend != "openai")
        throw ConfigError("config: 'backend' must be \"mock\" or \"openai\"");
    cfg.endpoint = get_typed<std::string>(doc, "endpoint", cfg.endpoint);
    cfg.domain = get_domain(doc, "domain", cfg.domain);

    if (doc.contains("strategy")) {
        if (!doc["strategy"].is_string())
            throw ConfigError("config: 'strategy' must be a string");
        try {
            cfg.strategy.kind = strategy_from_name(doc["strategy"].get<std::string>());
        } catch (const Error& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
        cfg.file_strategy_set = true;
    }
    if (doc.contains("verify")) {
        cfg.strategy.verify = get_typed<bool>(doc, "verify", cfg.strategy.verify);
        cfg.file_verify_set = true;
    }

    if (doc.contains("augment")) {
        const json& a = doc["augment"];
        if (!a.is_object()) throw ConfigError("config: 'augment' must be an object");
        cfg.augment.max_aug_retries =
            get_typed<int>(a, "max_aug_retries", cfg.augment.max_aug_retries);
        cfg.augment.max_verify_retries =
            get_typed<int>(a, "max_verify_retries", cfg.augment.max_verify_retries);
        cfg.augment.cda_temperature =
            get_typed<double>(a, "cda_temperature", cfg.augment.cda_temperature);
        cfg.augment.ada_temperature =
            get_typed<double>(a, "ada_temperature", cfg.augment.ada_temperature);
        cfg.augment.model = get_typed<std::string>(a, "model", cfg.augment.model);
        cfg.augment.transport_max_retries =
            get_typed<int>(a, "transport_max_retries", cfg.augment.transport_max_retries);
    }

    if (doc.contains("hyperparams")) {
        const json& h = doc["hyperparams"];
        if (!h.is_object()) throw ConfigError("config: 'hyperparams' must be an object");
        if (h.contains("alpha")) cfg.file_alpha_beta.alpha = get_typed<double>(h, "alpha", 0.0);
        if (h.contains("beta")) cfg.file_alpha_beta.beta = get_typed<double>(h, "beta", 0.0);
        cfg.hp.tau = get_typed<double>(h, "tau", cfg.hp.tau);
        cfg.hp.learning_rate = get_typed<double>(h, "learning_rate", cfg.hp.learning_rate);
        cfg.hp.batch_size = get_typed<int>(h, "batch_size", cfg.hp.batch_size);
        cfg.hp.max_epochs = get_typed<int>(h, "max_epochs", cfg.hp.max_epochs);
        cfg.hp.patience = get_typed<int>(h, "patience", cfg.hp.patience);
        cfg.hp.dropout_rate = get_typed<double>(h, "dropout_rate", cfg.hp.dropout_rate);
    }

    if (doc.contains("encoder")) {
        const json& e = doc["encoder"];
        if (!e.is_object()) throw ConfigError("config: 'encoder' must be an object");
        cfg.encoder.kind = get_typed<std::string>(e, "kind", cfg.encoder.kind);
        if (cfg.encoder.kind != "hash" && cfg.encoder.kind != "remote")
            throw ConfigError("config: encoder 'kind' must be \"hash\" or \"remote\"");
        cfg.encoder.dim = get_typed<int>(e, "dim", cfg.encoder.dim);
        cfg.encoder.seed = get_typed<std::uint64_t>(e, "seed", cfg.encoder.seed);
        cfg.encoder.endpoint = get_typed<std::string>(e, "endpoint", cfg.encoder.endpoint);
        cfg.encoder.model = get_typed<std::string>(e, "model", cfg.encoder.model);
    }

    if (doc.contains("train")) {
        const json& t = doc["train"];
        if (!t.is_object()) throw ConfigError("config: 'train' must be an object");
        cfg.projection_dim = get_typed<int>(t, "projection_dim", cfg.projection_dim);
        cfg.holdout_fraction = get_typed<double>(t, "holdout_fraction", cfg.holdout_fraction);
    }

    if (doc.contains("exemplars")) {
        const json& ex = doc["exemplars"];
        if (!ex.is_object())
            throw ConfigError("config: 'exemplars' must map domain to pair lists");
        for (const auto& [dom, pairs] : ex.items()) {
            if (dom != domain::restaurant && dom != domain::laptop)
                throw ConfigError("config: unknown exemplar domain '" + dom + "'");
            if (!pairs.is_array())
                throw ConfigError("config: exemplars for '" + dom + "' must be an array");
            std::vector<ExemplarPair> list;
            for (const json& pair : pairs) {
                if (!pair.is_object() || !pair.contains("source") ||
                    !pair.contains("augmented"))
                    throw ConfigError(
                        "config: each exemplar needs 'source' and 'augmented' strings");
                ExemplarPair ep;
                ep.source_sentence = pair["source"].get<std::string>();
                ep.augmented_sentence = pair["augmented"].get<std::string>();
                ep.domain = dom;
                list.push_back(std::move(ep));
            }
            cfg.exemplars.by_domain[dom] = std::move(list);
        }
    }

    cfg.workers = get_typed<int>(doc, "workers", cfg.workers);
    cfg.seed = get_typed<std::uint64_t>(doc, "seed", cfg.seed);
    cfg.verbose = get_typed<bool>(doc, "verbose", cfg.verbose);
    return cfg;
}

nlohmann::ordered_json effective_config_json(const RunConfig& cfg) {
    json doc;
    doc["seed"] = cfg.seed;
    doc["backend"] = cfg.backend;
    doc["endpoint"] = cfg.endpoint;
    doc["domain"] = cfg.domain;
    doc["strategy"] = std::string(strategy_name(cfg.strategy.kind));
    doc["verify"] = cfg.strategy.verify;
    doc["paths"] = {{"corpus_xml", cfg.corpus_xml}, {"triplets", cfg.triplets},
                    {"augmented", cfg.augmented},   {"test", cfg.test},
                    {"cache", cfg.cache},           {"checkpoint", cfg.checkpoint},
                    {"epoch_log", cfg.epoch_log},   {"metrics", cfg.metrics},
                    {"sweep_csv", cfg.sweep_csv},   {"augment_report", cfg.augment_report}};
    doc["augment"] = {{"max_aug_retries", cfg.augment.max_aug_retries},
                      {"max_verify_retries", cfg.augment.max_verify_retries},
                      {"cda_temperature", cfg.augment.cda_temperature},
                      {"ada_temperature", cfg.augment.ada_temperature},
                      {"model", cfg.augment.model},
                      {"transport_max_retries", cfg.augment.transport_max_retries}};
    doc["hyperparams"] = {{"alpha", cfg.hp.alpha},
                          {"beta", cfg.hp.beta},
                          {"tau", cfg.hp.tau},
                          {"learning_rate", cfg.hp.learning_rate},
                          {"batch_size", cfg.hp.batch_size},
                          {"max_epochs", cfg.hp.max_epochs},
                          {"patience", cfg.hp.patience},
                          {"dropout_rate", cfg.hp.dropout_rate}};
    doc["encoder"] = {{"kind", cfg.encoder.kind},
                      {"dim", cfg.encoder.dim},
                      {"seed", cfg.encoder.seed},
                      {"endpoint", cfg.encoder.endpoint},
                      {"model", cfg.encoder.model}};
    doc["train"] = {{"projection_dim", cfg.projection_dim},
                    {"holdout_fraction", cfg.holdout_fraction}};
    json exemplars = json::object();
    for (const auto& [dom, pairs] : cfg.exemplars.by_domain) {
        json list = json::array();
        for (const ExemplarPair& p : pairs)
            list.push_back({{"source", p.source_sentence}, {"augmented", p.augmented_sentence}});
        exemplars[dom] = std::move(list);
    }
    doc["exemplars"] = std::move(exemplars);
    doc["workers"] = cfg.workers;
    doc["verbose"] = cfg.verbose;
    return doc;
}

}  // namespace absaforge
