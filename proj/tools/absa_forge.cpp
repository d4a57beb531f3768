// absa-forge: ingest -> augment -> train -> eval -> sweep pipeline driver.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "absaforge/config.hpp"
#include "absaforge/corpus.hpp"
#include "absaforge/encoder.hpp"
#include "absaforge/errors.hpp"
#include "absaforge/gateway.hpp"
#include "absaforge/http_backend.hpp"
#include "absaforge/jsonl.hpp"
#include "absaforge/mock_backend.hpp"
#include "absaforge/model.hpp"
#include "absaforge/sweep.hpp"
#include "absaforge/train.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace absaforge;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
    bool print_effective = false;
};

RunConfig base_config(const GlobalOpts& g) {
    RunConfig cfg;
    if (!g.config_path.empty()) cfg = load_run_config(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.verbose) cfg.verbose = true;
    return cfg;
}

void require_input_file(const std::string& path, const char* what) {
    if (path.empty()) throw ConfigError(std::string(what) + " path is not set");
    if (!fs::exists(path))
        throw ConfigError(std::string(what) + " file does not exist: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int maybe_print_config(const RunConfig& cfg, const GlobalOpts& g) {
    if (!g.print_effective) return -1;
    std::cout << effective_config_json(cfg).dump(2) << '\n';
    return 0;
}

std::shared_ptr<ChatBackend> make_backend(const RunConfig& cfg) {
    if (cfg.backend == "mock") return std::make_shared<MockBackend>(cfg.seed, cfg.domain);
    HttpBackendOptions opts;
    if (!cfg.endpoint.empty()) opts.base_url = cfg.endpoint;
    return std::make_shared<HttpBackend>(opts);
}

int cmd_ingest(const RunConfig& cfg, const std::string& out_path) {
    require_input_file(cfg.corpus_xml, "corpus XML");
    ParseReport report;
    std::vector<Triplet> triplets =
        parse_semeval_xml(read_file(cfg.corpus_xml), cfg.domain, report);
    if (!out_path.empty()) write_jsonl(triplets, out_path);

    CorpusStats stats = compute_stats(triplets, Split::train);
    std::cout << "positive=" << stats.positive() << " neutral=" << stats.neutral()
              << " negative=" << stats.negative() << '\n';
    std::cout << "sentences=" << report.sentences << " aspect_terms=" << report.aspect_terms
              << " conflict_skipped=" << report.conflict_skipped
              << " invalid_skipped=" << report.invalid_skipped << '\n';
    if (cfg.verbose)
        for (const std::string& id : report.invalid_ids)
            std::cerr << "skipped invalid entry in sentence " << id << '\n';
    return 0;
}

int cmd_augment(const RunConfig& cfg) {
    require_input_file(cfg.triplets, "triplet");
    std::vector<Triplet> triplets = read_triplets_jsonl(cfg.triplets);

    Gateway gateway(make_backend(cfg),
                    cfg.cache.empty() ? std::nullopt : std::optional<fs::path>(cfg.cache),
                    /*max_concurrency=*/4, BackoffPolicy{}, cfg.seed);

    AugmentRunReport report;
    std::vector<AugmentedSample> samples =
        run_augmentation(triplets, gateway, cfg.strategy, cfg.exemplars, cfg.augment,
                         cfg.workers, &report);
    report.seed = cfg.seed;
    write_jsonl(samples, cfg.augmented);

    if (!cfg.augment_report.empty()) {
        json doc;
        doc["total"] = report.total;
        doc["fallbacks"] = report.fallbacks;
        doc["verified_distinct"] = report.verified_distinct;
        doc["retries_total"] = report.retries_total;
        doc["mean_retries"] = report.mean_retries();
        doc["distinct_rate"] = report.distinct_rate();
        doc["seed"] = report.seed;
        doc["strategy"] = std::string(strategy_name(cfg.strategy.kind));
        doc["verify"] = cfg.strategy.verify;
        doc["backend"] = cfg.backend;
        std::ofstream out(cfg.augment_report);
        if (!out) throw Error("cannot open report file: " + cfg.augment_report);
        out << doc.dump(2) << '\n';
    }

    std::cout << "augmented=" << report.total << " fallbacks=" << report.fallbacks
              << " mean_retries=" << report.mean_retries()
              << " distinct_rate=" << report.distinct_rate() << '\n';
    if (cfg.verbose)
        std::cerr << "backend_calls=" << gateway.backend_calls() << " cache=" << cfg.cache
                  << '\n';
    return 0;
}

// The (strategy, verify) pair that picks the published alpha/beta row: CLI
// flags win, then the config file, then the augmented file's own tag.
Strategy effective_strategy(const RunConfig& cfg, bool cli_strategy_set, bool cli_verify_set,
                            const std::vector<AugmentedSample>& augmented) {
    Strategy s = cfg.strategy;
    if (!augmented.empty()) {
        if (!cli_strategy_set && !cfg.file_strategy_set) s.kind = augmented.front().strategy.kind;
        if (!cli_verify_set && !cfg.file_verify_set) s.verify = augmented.front().strategy.verify;
    }
    return s;
}

struct TrainArtifacts {
    TrainResult result;
    PairedDataset pairs;
    std::unique_ptr<Encoder> encoder;
};

TrainArtifacts run_training(const RunConfig& cfg) {
    require_input_file(cfg.triplets, "triplet");
    require_input_file(cfg.augmented, "augmented");
    std::vector<Triplet> triplets = read_triplets_jsonl(cfg.triplets);
    std::vector<AugmentedSample> augmented = read_augmented_jsonl(cfg.augmented);

    TrainArtifacts art;
    art.encoder = make_encoder(cfg.encoder);
    art.pairs = build_pairs(triplets, augmented, *art.encoder);

    TrainConfig tc;
    tc.hp = cfg.hp;
    tc.hp.seed = cfg.seed;
    tc.projection_dim = cfg.projection_dim;
    tc.holdout_fraction = cfg.holdout_fraction;
    art.result = train(art.pairs, tc);
    return art;
}

void write_epoch_log(const std::string& path, const TrainResult& r) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw Error("cannot open epoch log for writing: " + path);
    for (const EpochRecord& rec : r.history) {
        json line;
        line["epoch"] = rec.epoch;
        line["train_total"] = rec.train_total;
        line["train_ssct"] = rec.train_ssct;
        line["train_cl"] = rec.train_cl;
        line["monitor_accuracy"] = rec.monitor_accuracy;
        line["monitor_macro_f1"] = rec.monitor_macro_f1;
        line["best_so_far"] = rec.best_so_far;
        line["seed"] = r.seed;
        out << line.dump() << '\n';
    }
}

int cmd_train(const RunConfig& cfg) {
    TrainArtifacts art = run_training(cfg);

    Checkpoint ckpt;
    ckpt.params = art.result.best_params;
    ckpt.encoder = cfg.encoder;
    ckpt.hyperparams = cfg.hp;
    ckpt.hyperparams.seed = cfg.seed;
    ckpt.seed = cfg.seed;
    save_checkpoint(cfg.checkpoint, ckpt);
    write_epoch_log(cfg.epoch_log, art.result);

    std::cout << "epochs_run=" << art.result.epochs_run
              << " best_epoch=" << art.result.best_epoch
              << " monitor_accuracy=" << art.result.best_monitor_accuracy
              << " monitor_macro_f1=" << art.result.best_monitor_macro_f1 << '\n';
    if (cfg.verbose)
        std::cerr << "checkpoint=" << cfg.checkpoint << " epoch_log=" << cfg.epoch_log << '\n';
    return 0;
}

int cmd_eval(const RunConfig& cfg) {
    require_input_file(cfg.checkpoint, "checkpoint");
    require_input_file(cfg.test, "test");
    Checkpoint ckpt = load_checkpoint(cfg.checkpoint);
    std::vector<Triplet> test = read_triplets_jsonl(cfg.test);
    if (test.empty()) throw ConfigError("test set is empty: " + cfg.test);

    std::unique_ptr<Encoder> encoder = make_encoder(ckpt.encoder);
    EvalMetrics m = evaluate(ckpt.params, *encoder, test);

    json doc;
    doc["accuracy"] = m.accuracy;
    doc["macro_f1"] = m.macro_f1;
    doc["confusion"] = {{m.confusion[0][0], m.confusion[0][1], m.confusion[0][2]},
                        {m.confusion[1][0], m.confusion[1][1], m.confusion[1][2]},
                        {m.confusion[2][0], m.confusion[2][1], m.confusion[2][2]}};
    doc["n_test"] = m.n_test;
    if (!cfg.metrics.empty()) {
        std::ofstream out(cfg.metrics);
        if (!out) throw Error("cannot open metrics file for writing: " + cfg.metrics);
        out << doc.dump(2) << '\n';
    }
    std::cout << "accuracy=" << m.accuracy << " macro_f1=" << m.macro_f1
              << " n_test=" << m.n_test << '\n';
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::vector<double>& alphas,
              const std::vector<double>& betas) {
    require_input_file(cfg.triplets, "triplet");
    require_input_file(cfg.augmented, "augmented");
    std::vector<Triplet> triplets = read_triplets_jsonl(cfg.triplets);
    std::vector<AugmentedSample> augmented = read_augmented_jsonl(cfg.augmented);

    std::unique_ptr<Encoder> encoder = make_encoder(cfg.encoder);
    PairedDataset pairs = build_pairs(triplets, augmented, *encoder);

    TrainConfig tc;
    tc.hp = cfg.hp;
    tc.hp.seed = cfg.seed;
    tc.projection_dim = cfg.projection_dim;
    tc.holdout_fraction = cfg.holdout_fraction;

    SweepResult result = run_sweep(pairs, tc,
                                   alphas.empty() ? sensitivity_grid() : alphas,
                                   betas.empty() ? sensitivity_grid() : betas,
                                   nullptr, cfg.workers);
    write_sweep_csv(cfg.sweep_csv, result.rows);

    std::cout << "rows=" << result.rows.size();
    if (result.best_index != SweepResult::npos) {
        const SweepRow& best = result.rows[result.best_index];
        std::cout << " best_alpha=" << best.alpha << " best_beta=" << best.beta
                  << " best_accuracy=" << best.accuracy;
    } else {
        std::cout << " best=none (all grid points failed)";
    }
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ABSA augmentation and contrastive-training pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON config file");
    std::uint64_t seed_flag = 0;
    auto* seed_opt = app.add_option("--seed", seed_flag, "root RNG seed");
    app.add_flag("--verbose", g.verbose, "chattier stderr diagnostics");
    app.add_flag("--print-effective-config", g.print_effective,
                 "print the resolved configuration and exit");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse corpus XML into triplet JSONL");
    std::string ingest_xml, ingest_domain, ingest_out;
    ingest->add_option("xml", ingest_xml, "corpus XML file");
    ingest->add_option("--domain", ingest_domain, "restaurant or laptop");
    ingest->add_option("-o,--out", ingest_out, "triplet JSONL output path");

    // augment
    auto* augment = app.add_subcommand("augment", "generate augmented samples");
    std::string aug_strategy, aug_backend, aug_endpoint, aug_domain, aug_in, aug_out,
        aug_cache, aug_report, aug_model;
    bool aug_verify = false;
    int aug_verify_retries = -1, aug_workers = 0;
    augment->add_option("--strategy", aug_strategy, "cda, ada or cada");
    augment->add_flag("--verify", aug_verify, "distinct-aspect verification loop");
    augment->add_option("--max-verify-retries", aug_verify_retries, "verification budget");
    augment->add_option("--backend", aug_backend, "mock or openai");
    augment->add_option("--endpoint", aug_endpoint, "chat API base URL (openai backend)");
    augment->add_option("--domain", aug_domain, "exemplar and mock lexicon domain");
    augment->add_option("--in", aug_in, "triplet JSONL input");
    augment->add_option("-o,--out", aug_out, "augmented JSONL output");
    augment->add_option("--cache", aug_cache, "gateway response cache (JSONL journal)");
    augment->add_option("--report", aug_report, "run report JSON output");
    augment->add_option("--model", aug_model, "chat model name");
    augment->add_option("--workers", aug_workers, "concurrent augmentation workers");

    // shared train/eval/sweep knobs
    auto add_model_opts = [](CLI::App* cmd, std::string& triplets, std::string& augmented,
                             double& alpha, bool& alpha_set, double& beta, bool& beta_set,
                             RunConfig& flags, bool& tau_set, bool& lr_set, bool& bs_set,
                             bool& ep_set, bool& pat_set, bool& do_set, bool& pd_set,
                             bool& ho_set) {
        cmd->add_option("--triplets", triplets, "triplet JSONL input");
        cmd->add_option("--augmented", augmented, "augmented JSONL input");
        cmd->add_option("--alpha", alpha, "augmented cross-entropy weight")
            ->each([&alpha_set](const std::string&) { alpha_set = true; });
        cmd->add_option("--beta", beta, "contrastive loss weight")
            ->each([&beta_set](const std::string&) { beta_set = true; });
        cmd->add_option("--tau", flags.hp.tau, "contrastive temperature")
            ->each([&tau_set](const std::string&) { tau_set = true; });
        cmd->add_option("--lr", flags.hp.learning_rate, "Adam learning rate")
            ->each([&lr_set](const std::string&) { lr_set = true; });
        cmd->add_option("--batch-size", flags.hp.batch_size, "mini-batch size")
            ->each([&bs_set](const std::string&) { bs_set = true; });
        cmd->add_option("--max-epochs", flags.hp.max_epochs, "epoch budget")
            ->each([&ep_set](const std::string&) { ep_set = true; });
        cmd->add_option("--patience", flags.hp.patience, "early-stopping patience")
            ->each([&pat_set](const std::string&) { pat_set = true; });
        cmd->add_option("--dropout", flags.hp.dropout_rate, "embedding dropout rate")
            ->each([&do_set](const std::string&) { do_set = true; });
        cmd->add_option("--projection-dim", flags.projection_dim, "tanh projection width")
            ->each([&pd_set](const std::string&) { pd_set = true; });
        cmd->add_option("--holdout", flags.holdout_fraction, "monitor holdout fraction")
            ->each([&ho_set](const std::string&) { ho_set = true; });
    };

    auto add_encoder_opts = [](CLI::App* cmd, EncoderSpec& spec, bool& kind_set,
                               bool& dim_set, bool& eseed_set, bool& eep_set, bool& em_set) {
        cmd->add_option("--encoder", spec.kind, "hash or remote")
            ->each([&kind_set](const std::string&) { kind_set = true; });
        cmd->add_option("--encoder-dim", spec.dim, "embedding dimension")
            ->each([&dim_set](const std::string&) { dim_set = true; });
        cmd->add_option("--encoder-seed", spec.seed, "hash encoder seed")
            ->each([&eseed_set](const std::string&) { eseed_set = true; });
        cmd->add_option("--encoder-endpoint", spec.endpoint, "embeddings API base URL")
            ->each([&eep_set](const std::string&) { eep_set = true; });
        cmd->add_option("--encoder-model", spec.model, "embeddings model name")
            ->each([&em_set](const std::string&) { em_set = true; });
    };

    struct ModelFlags {
        std::string triplets, augmented, strategy;
        bool verify = false;
        double alpha = 0.0, beta = 0.0;
        bool alpha_set = false, beta_set = false;
        RunConfig values;  // holds flag values only; merged into cfg when set
        bool tau = false, lr = false, bs = false, ep = false, pat = false, dro = false,
             pd = false, ho = false;
        EncoderSpec enc;
        bool enc_kind = false, enc_dim = false, enc_seed = false, enc_ep = false,
             enc_model = false;

        AlphaBetaOverride alpha_beta() const {
            AlphaBetaOverride o;
            if (alpha_set) o.alpha = alpha;
            if (beta_set) o.beta = beta;
            return o;
        }
    };

    // train
    auto* train_cmd = app.add_subcommand("train", "train the classifier head");
    ModelFlags tf;
    std::string train_ckpt, train_log;
    train_cmd->add_option("--strategy", tf.strategy, "strategy tag for default alpha/beta");
    train_cmd->add_flag("--verify", tf.verify, "verification variant for defaults");
    add_model_opts(train_cmd, tf.triplets, tf.augmented, tf.alpha, tf.alpha_set, tf.beta,
                   tf.beta_set, tf.values, tf.tau, tf.lr, tf.bs, tf.ep, tf.pat, tf.dro, tf.pd,
                   tf.ho);
    add_encoder_opts(train_cmd, tf.enc, tf.enc_kind, tf.enc_dim, tf.enc_seed, tf.enc_ep,
                     tf.enc_model);
    train_cmd->add_option("--checkpoint", train_ckpt, "checkpoint JSON output");
    train_cmd->add_option("--epoch-log", train_log, "epoch record JSONL output");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a test set");
    std::string eval_ckpt, eval_test, eval_metrics;
    eval_cmd->add_option("--checkpoint", eval_ckpt, "checkpoint JSON input");
    eval_cmd->add_option("--test", eval_test, "test triplet JSONL");
    eval_cmd->add_option("--metrics", eval_metrics, "metrics JSON output");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "alpha/beta grid search");
    ModelFlags sf;
    std::string sweep_out;
    std::vector<double> sweep_alphas, sweep_betas;
    int sweep_workers = 0;
    add_model_opts(sweep_cmd, sf.triplets, sf.augmented, sf.alpha, sf.alpha_set, sf.beta,
                   sf.beta_set, sf.values, sf.tau, sf.lr, sf.bs, sf.ep, sf.pat, sf.dro, sf.pd,
                   sf.ho);
    add_encoder_opts(sweep_cmd, sf.enc, sf.enc_kind, sf.enc_dim, sf.enc_seed, sf.enc_ep,
                     sf.enc_model);
    sweep_cmd->add_option("--alphas", sweep_alphas, "alpha grid values")->delimiter(',');
    sweep_cmd->add_option("--betas", sweep_betas, "beta grid values")->delimiter(',');
    sweep_cmd->add_option("-o,--out", sweep_out, "sweep CSV output");
    sweep_cmd->add_option("--workers", sweep_workers, "parallel grid workers");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = base_config(g);
        if (seed_opt->count() > 0) cfg.seed = seed_flag;

        auto merge_model_flags = [&cfg](const ModelFlags& f) {
            if (!f.triplets.empty()) cfg.triplets = f.triplets;
            if (!f.augmented.empty()) cfg.augmented = f.augmented;
            if (f.tau) cfg.hp.tau = f.values.hp.tau;
            if (f.lr) cfg.hp.learning_rate = f.values.hp.learning_rate;
            if (f.bs) cfg.hp.batch_size = f.values.hp.batch_size;
            if (f.ep) cfg.hp.max_epochs = f.values.hp.max_epochs;
            if (f.pat) cfg.hp.patience = f.values.hp.patience;
            if (f.dro) cfg.hp.dropout_rate = f.values.hp.dropout_rate;
            if (f.pd) cfg.projection_dim = f.values.projection_dim;
            if (f.ho) cfg.holdout_fraction = f.values.holdout_fraction;
            if (f.enc_kind) cfg.encoder.kind = f.enc.kind;
            if (f.enc_dim) cfg.encoder.dim = f.enc.dim;
            if (f.enc_seed) cfg.encoder.seed = f.enc.seed;
            if (f.enc_ep) cfg.encoder.endpoint = f.enc.endpoint;
            if (f.enc_model) cfg.encoder.model = f.enc.model;
        };

        if (ingest->parsed()) {
            if (!ingest_xml.empty()) cfg.corpus_xml = ingest_xml;
            if (!ingest_domain.empty()) {
                if (ingest_domain != domain::restaurant && ingest_domain != domain::laptop)
                    throw ConfigError("--domain must be restaurant or laptop");
                cfg.domain = ingest_domain;
            }
            if (!ingest_out.empty()) cfg.triplets = ingest_out;
            if (int rc = maybe_print_config(cfg, g); rc >= 0) return rc;
            return cmd_ingest(cfg, ingest_out.empty() ? cfg.triplets : ingest_out);
        }

        if (augment->parsed()) {
            if (!aug_strategy.empty()) cfg.strategy.kind = strategy_from_name(aug_strategy);
            if (augment->count("--verify") > 0) cfg.strategy.verify = aug_verify;
            if (aug_verify_retries >= 0) cfg.augment.max_verify_retries = aug_verify_retries;
            if (!aug_backend.empty()) {
                if (aug_backend != "mock" && aug_backend != "openai")
                    throw ConfigError("--backend must be mock or openai");
                cfg.backend = aug_backend;
            }
            if (!aug_endpoint.empty()) cfg.endpoint = aug_endpoint;
            if (!aug_domain.empty()) {
                if (aug_domain != domain::restaurant && aug_domain != domain::laptop)
                    throw ConfigError("--domain must be restaurant or laptop");
                cfg.domain = aug_domain;
            }
            if (!aug_in.empty()) cfg.triplets = aug_in;
            if (!aug_out.empty()) cfg.augmented = aug_out;
            if (augment->count("--cache") > 0) cfg.cache = aug_cache;
            if (!aug_report.empty()) cfg.augment_report = aug_report;
            if (!aug_model.empty()) cfg.augment.model = aug_model;
            if (aug_workers > 0) cfg.workers = aug_workers;
            if (int rc = maybe_print_config(cfg, g); rc >= 0) return rc;
            return cmd_augment(cfg);
        }

        if (train_cmd->parsed()) {
            merge_model_flags(tf);
            if (!train_ckpt.empty()) cfg.checkpoint = train_ckpt;
            if (!train_log.empty()) cfg.epoch_log = train_log;
            const bool cli_strategy = !tf.strategy.empty();
            const bool cli_verify = train_cmd->count("--verify") > 0;
            if (cli_strategy) cfg.strategy.kind = strategy_from_name(tf.strategy);
            if (cli_verify) cfg.strategy.verify = tf.verify;

            require_input_file(cfg.augmented, "augmented");
            std::vector<AugmentedSample> peek = read_augmented_jsonl(cfg.augmented);
            Strategy strat = effective_strategy(cfg, cli_strategy, cli_verify, peek);
            cfg.strategy = strat;
            AlphaBeta ab = resolve_alpha_beta(strat, cfg.file_alpha_beta, tf.alpha_beta());
            cfg.hp.alpha = ab.alpha;
            cfg.hp.beta = ab.beta;
            if (int rc = maybe_print_config(cfg, g); rc >= 0) return rc;
            return cmd_train(cfg);
        }

        if (eval_cmd->parsed()) {
            if (!eval_ckpt.empty()) cfg.checkpoint = eval_ckpt;
            if (!eval_test.empty()) cfg.test = eval_test;
            if (!eval_metrics.empty()) cfg.metrics = eval_metrics;
            if (int rc = maybe_print_config(cfg, g); rc >= 0) return rc;
            return cmd_eval(cfg);
        }

        if (sweep_cmd->parsed()) {
            merge_model_flags(sf);
            if (!sweep_out.empty()) cfg.sweep_csv = sweep_out;
            if (sweep_workers > 0) cfg.workers = sweep_workers;
            // grid points supply alpha/beta; base values are irrelevant but
            // must pass validation
            cfg.hp.alpha = 0.0;
            cfg.hp.beta = 0.0;
            if (int rc = maybe_print_config(cfg, g); rc >= 0) return rc;
            return cmd_sweep(cfg, sweep_alphas, sweep_betas);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
