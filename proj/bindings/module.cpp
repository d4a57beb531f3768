#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>

#include "absaforge/augment.hpp"
#include "absaforge/config.hpp"
#include "absaforge/corpus.hpp"
#include "absaforge/encoder.hpp"
#include "absaforge/errors.hpp"
#include "absaforge/gateway.hpp"
#include "absaforge/jsonl.hpp"
#include "absaforge/mock_backend.hpp"
#include "absaforge/model.hpp"
#include "absaforge/prompts.hpp"
#include "absaforge/sweep.hpp"
#include "absaforge/train.hpp"

namespace py = pybind11;
using namespace absaforge;

namespace {

std::vector<Polarity> to_polarities(const std::vector<int>& labels) {
    std::vector<Polarity> out;
    out.reserve(labels.size());
    for (int v : labels) out.push_back(polarity_from_int(v));
    return out;
}

std::vector<int> from_polarities(const std::vector<Polarity>& labels) {
    std::vector<int> out;
    out.reserve(labels.size());
    for (Polarity p : labels) out.push_back(static_cast<int>(p));
    return out;
}

Batch make_batch(const Eigen::MatrixXd& embeddings, const std::vector<int>& labels) {
    Batch b;
    b.embeddings = embeddings;
    b.labels = to_polarities(labels);
    return b;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "ABSA augmentation and contrastive-training toolkit";

    py::register_exception<Error>(m, "ForgeError", PyExc_RuntimeError);

    py::enum_<Polarity>(m, "Polarity")
        .value("negative", Polarity::negative)
        .value("neutral", Polarity::neutral)
        .value("positive", Polarity::positive);

    py::class_<Triplet>(m, "Triplet")
        .def(py::init<>())
        .def_readwrite("id", &Triplet::id)
        .def_readwrite("sentence", &Triplet::sentence)
        .def_readwrite("aspect", &Triplet::aspect)
        .def_readwrite("aspect_from", &Triplet::aspect_from)
        .def_readwrite("aspect_to", &Triplet::aspect_to)
        .def_readwrite("polarity", &Triplet::polarity)
        .def_readwrite("domain", &Triplet::domain)
        .def("__eq__", [](const Triplet& a, const Triplet& b) { return a == b; });

    py::class_<ParseReport>(m, "ParseReport")
        .def_readonly("sentences", &ParseReport::sentences)
        .def_readonly("aspect_terms", &ParseReport::aspect_terms)
        .def_readonly("conflict_skipped", &ParseReport::conflict_skipped)
        .def_readonly("invalid_skipped", &ParseReport::invalid_skipped)
        .def_readonly("invalid_ids", &ParseReport::invalid_ids);

    m.def(
        "parse_semeval_xml",
        [](const std::string& xml, const std::string& domain) {
            ParseReport report;
            std::vector<Triplet> t = parse_semeval_xml(xml, domain, report);
            return py::make_tuple(std::move(t), std::move(report));
        },
        py::arg("xml"), py::arg("domain"));

    py::class_<CorpusStats>(m, "CorpusStats")
        .def_property_readonly("negative", &CorpusStats::negative)
        .def_property_readonly("neutral", &CorpusStats::neutral)
        .def_property_readonly("positive", &CorpusStats::positive)
        .def_property_readonly("total", &CorpusStats::total);
    m.def("compute_stats",
          [](const std::vector<Triplet>& t) { return compute_stats(t, Split::train); });

    m.def("write_triplets_jsonl",
          [](const std::vector<Triplet>& t, const std::filesystem::path& p) {
              write_jsonl(t, p);
          });
    m.def("read_triplets_jsonl", &read_triplets_jsonl);
    m.def("write_augmented_jsonl",
          [](const std::vector<AugmentedSample>& s, const std::filesystem::path& p) {
              write_jsonl(s, p);
          });
    m.def("read_augmented_jsonl", &read_augmented_jsonl);

    // prompts
    py::class_<ExemplarPair>(m, "ExemplarPair")
        .def(py::init<>())
        .def_readwrite("source_sentence", &ExemplarPair::source_sentence)
        .def_readwrite("augmented_sentence", &ExemplarPair::augmented_sentence)
        .def_readwrite("domain", &ExemplarPair::domain);
    m.def("default_exemplars", &default_exemplars, py::arg("domain"));
    m.def("build_cda_prompt", &build_cda_prompt, py::arg("triplet"), py::arg("exemplars"));
    m.def("build_ada_prompt", &build_ada_prompt, py::arg("triplet"));
    m.def("sanitize_aspect", &sanitize_aspect, py::arg("raw"));
    m.def("substitute_aspect", &substitute_aspect, py::arg("sentence"), py::arg("span"),
          py::arg("old_aspect"), py::arg("new_aspect"));

    // gateway + mock backend
    py::class_<ChatMessage>(m, "ChatMessage")
        .def(py::init([](std::string role, std::string content) {
                 return ChatMessage{std::move(role), std::move(content)};
             }),
             py::arg("role"), py::arg("content"))
        .def_readwrite("role", &ChatMessage::role)
        .def_readwrite("content", &ChatMessage::content);

    py::class_<PromptRequest>(m, "PromptRequest")
        .def(py::init<>())
        .def_readwrite("model", &PromptRequest::model)
        .def_readwrite("temperature", &PromptRequest::temperature)
        .def_readwrite("messages", &PromptRequest::messages)
        .def_readwrite("max_retries", &PromptRequest::max_retries);

    py::class_<ChatResponse>(m, "ChatResponse")
        .def_readonly("text", &ChatResponse::text)
        .def_readonly("from_cache", &ChatResponse::from_cache)
        .def_readonly("attempt_count", &ChatResponse::attempt_count);

    py::class_<ChatBackend, std::shared_ptr<ChatBackend>>(m, "ChatBackend");

    py::class_<MockScript>(m, "MockScript")
        .def(py::init<>())
        .def_readwrite("repeat_original_first_k", &MockScript::repeat_original_first_k)
        .def_readwrite("cda_drop_aspect", &MockScript::cda_drop_aspect)
        .def_readwrite("cda_reply_by_sentence", &MockScript::cda_reply_by_sentence)
        .def_readwrite("ada_reply_by_sentence", &MockScript::ada_reply_by_sentence);

    py::class_<MockBackend, ChatBackend, std::shared_ptr<MockBackend>>(m, "MockBackend")
        .def(py::init<std::uint64_t, std::string, MockScript>(), py::arg("seed") = 0,
             py::arg("domain") = "restaurant", py::arg("script") = MockScript{});

    py::class_<Gateway>(m, "Gateway")
        .def(py::init([](std::shared_ptr<ChatBackend> backend,
                         std::optional<std::filesystem::path> cache_path, int max_concurrency,
                         std::uint64_t seed) {
                 return std::make_unique<Gateway>(std::move(backend), std::move(cache_path),
                                                  max_concurrency, BackoffPolicy{}, seed);
             }),
             py::arg("backend"), py::arg("cache_path") = std::nullopt,
             py::arg("max_concurrency") = 4, py::arg("seed") = 0)
        .def("complete", &Gateway::complete, py::arg("request"), py::arg("ordinal") = 0)
        .def("backend_calls", &Gateway::backend_calls);

    // augmentation
    py::enum_<StrategyKind>(m, "StrategyKind")
        .value("CDA", StrategyKind::CDA)
        .value("ADA", StrategyKind::ADA)
        .value("CADA", StrategyKind::CADA);

    py::class_<Strategy>(m, "Strategy")
        .def(py::init([](StrategyKind kind, bool verify) {
                 return Strategy{kind, verify};
             }),
             py::arg("kind"), py::arg("verify") = false)
        .def_readwrite("kind", &Strategy::kind)
        .def_readwrite("verify", &Strategy::verify);

    py::class_<AugmentOptions>(m, "AugmentOptions")
        .def(py::init<>())
        .def_readwrite("max_aug_retries", &AugmentOptions::max_aug_retries)
        .def_readwrite("max_verify_retries", &AugmentOptions::max_verify_retries)
        .def_readwrite("cda_temperature", &AugmentOptions::cda_temperature)
        .def_readwrite("ada_temperature", &AugmentOptions::ada_temperature)
        .def_readwrite("model", &AugmentOptions::model)
        .def_readwrite("transport_max_retries", &AugmentOptions::transport_max_retries);

    py::class_<AugmentedSample>(m, "AugmentedSample")
        .def(py::init<>())
        .def_readwrite("source_id", &AugmentedSample::source_id)
        .def_readwrite("aug_sentence", &AugmentedSample::aug_sentence)
        .def_readwrite("aug_aspect", &AugmentedSample::aug_aspect)
        .def_readwrite("polarity", &AugmentedSample::polarity)
        .def_readwrite("strategy", &AugmentedSample::strategy)
        .def_readwrite("retries_used", &AugmentedSample::retries_used)
        .def_readwrite("verified_distinct", &AugmentedSample::verified_distinct)
        .def_readwrite("fallback", &AugmentedSample::fallback);

    py::class_<AugmentRunReport>(m, "AugmentRunReport")
        .def_readonly("total", &AugmentRunReport::total)
        .def_readonly("fallbacks", &AugmentRunReport::fallbacks)
        .def_readonly("verified_distinct", &AugmentRunReport::verified_distinct)
        .def_readonly("retries_total", &AugmentRunReport::retries_total)
        .def_readonly("seed", &AugmentRunReport::seed)
        .def("mean_retries", &AugmentRunReport::mean_retries)
        .def("distinct_rate", &AugmentRunReport::distinct_rate);

    m.def("augment_cda", &augment_cda, py::arg("triplet"), py::arg("gateway"),
          py::arg("exemplars"), py::arg("options") = AugmentOptions{});
    m.def("augment_ada", &augment_ada, py::arg("triplet"), py::arg("gateway"),
          py::arg("verify") = false, py::arg("options") = AugmentOptions{});
    m.def("augment_cada", &augment_cada, py::arg("triplet"), py::arg("gateway"),
          py::arg("exemplars"), py::arg("verify") = false,
          py::arg("options") = AugmentOptions{});
    m.def(
        "run_augmentation",
        [](const std::vector<Triplet>& triplets, Gateway& gateway, Strategy strategy,
           const AugmentOptions& options, int workers) {
            ExemplarConfig exemplars;
            AugmentRunReport report;
            std::vector<AugmentedSample> out = run_augmentation(
                triplets, gateway, strategy, exemplars, options, workers, &report);
            return py::make_tuple(std::move(out), std::move(report));
        },
        py::arg("triplets"), py::arg("gateway"), py::arg("strategy"),
        py::arg("options") = AugmentOptions{}, py::arg("workers") = 1);

    // encoding + model
    m.def("hash_embed", &hash_embed, py::arg("text"), py::arg("dim"), py::arg("seed"));
    m.def("pair_text", &Encoder::pair_text, py::arg("sentence"), py::arg("aspect"));

    py::class_<ModelParams>(m, "ModelParams")
        .def_static("init", &ModelParams::init, py::arg("d"), py::arg("p"), py::arg("seed"))
        .def_readwrite("W_p", &ModelParams::W_p)
        .def_readwrite("b_p", &ModelParams::b_p)
        .def_readwrite("W_s", &ModelParams::W_s)
        .def_readwrite("b_s", &ModelParams::b_s);

    py::class_<Hyperparams>(m, "Hyperparams")
        .def(py::init<>())
        .def_readwrite("alpha", &Hyperparams::alpha)
        .def_readwrite("beta", &Hyperparams::beta)
        .def_readwrite("tau", &Hyperparams::tau)
        .def_readwrite("learning_rate", &Hyperparams::learning_rate)
        .def_readwrite("batch_size", &Hyperparams::batch_size)
        .def_readwrite("max_epochs", &Hyperparams::max_epochs)
        .def_readwrite("patience", &Hyperparams::patience)
        .def_readwrite("dropout_rate", &Hyperparams::dropout_rate)
        .def_readwrite("seed", &Hyperparams::seed);

    py::class_<LossBreakdown>(m, "LossBreakdown")
        .def_readonly("total", &LossBreakdown::total)
        .def_readonly("ssct", &LossBreakdown::ssct)
        .def_readonly("cl", &LossBreakdown::cl);

    py::class_<Gradients>(m, "Gradients")
        .def_readonly("W_p", &Gradients::W_p)
        .def_readonly("b_p", &Gradients::b_p)
        .def_readonly("W_s", &Gradients::W_s)
        .def_readonly("b_s", &Gradients::b_s);

    m.def(
        "ce_loss",
        [](const Eigen::VectorXd& logits, int label) {
            return ce_loss(logits, polarity_from_int(label));
        },
        py::arg("logits"), py::arg("label"));
    m.def("info_nce", &info_nce, py::arg("h"), py::arg("h_aug"), py::arg("tau"));
    m.def(
        "ssct_loss",
        [](const Eigen::MatrixXd& src, const Eigen::MatrixXd& aug,
           const std::vector<int>& labels, const ModelParams& params, double alpha) {
            return ssct_loss(make_batch(src, labels), make_batch(aug, labels), params, alpha);
        },
        py::arg("src"), py::arg("aug"), py::arg("labels"), py::arg("params"),
        py::arg("alpha"));
    m.def(
        "total_loss",
        [](const Eigen::MatrixXd& src, const Eigen::MatrixXd& aug,
           const std::vector<int>& labels, const ModelParams& params, const Hyperparams& hp) {
            return total_loss(make_batch(src, labels), make_batch(aug, labels), params, hp);
        },
        py::arg("src"), py::arg("aug"), py::arg("labels"), py::arg("params"), py::arg("hp"));
    m.def(
        "grad_total_loss",
        [](const Eigen::MatrixXd& src, const Eigen::MatrixXd& aug,
           const std::vector<int>& labels, const ModelParams& params, const Hyperparams& hp) {
            LossBreakdown loss;
            Gradients g = grad_total_loss(make_batch(src, labels), make_batch(aug, labels),
                                          params, hp, &loss);
            return py::make_tuple(std::move(g), loss);
        },
        py::arg("src"), py::arg("aug"), py::arg("labels"), py::arg("params"), py::arg("hp"));

    // training + evaluation
    py::class_<PairedDataset>(m, "PairedDataset")
        .def(py::init([](const Eigen::MatrixXd& src, const Eigen::MatrixXd& aug,
                         const std::vector<int>& labels, std::vector<std::string> ids) {
                 PairedDataset d;
                 d.src = src;
                 d.aug = aug;
                 d.labels = to_polarities(labels);
                 if (ids.empty())
                     for (Eigen::Index i = 0; i < src.rows(); ++i)
                         ids.push_back(std::to_string(i));
                 d.ids = std::move(ids);
                 return d;
             }),
             py::arg("src"), py::arg("aug"), py::arg("labels"),
             py::arg("ids") = std::vector<std::string>{})
        .def_readonly("src", &PairedDataset::src)
        .def_readonly("aug", &PairedDataset::aug)
        .def_property_readonly(
            "labels", [](const PairedDataset& d) { return from_polarities(d.labels); })
        .def("__len__", [](const PairedDataset& d) { return d.size(); });

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("hp", &TrainConfig::hp)
        .def_readwrite("projection_dim", &TrainConfig::projection_dim)
        .def_readwrite("holdout_fraction", &TrainConfig::holdout_fraction);

    py::class_<EpochRecord>(m, "EpochRecord")
        .def_readonly("epoch", &EpochRecord::epoch)
        .def_readonly("train_total", &EpochRecord::train_total)
        .def_readonly("train_ssct", &EpochRecord::train_ssct)
        .def_readonly("train_cl", &EpochRecord::train_cl)
        .def_readonly("monitor_accuracy", &EpochRecord::monitor_accuracy)
        .def_readonly("monitor_macro_f1", &EpochRecord::monitor_macro_f1)
        .def_readonly("best_so_far", &EpochRecord::best_so_far);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("best_params", &TrainResult::best_params)
        .def_readonly("history", &TrainResult::history)
        .def_readonly("best_epoch", &TrainResult::best_epoch)
        .def_readonly("best_monitor_accuracy", &TrainResult::best_monitor_accuracy)
        .def_readonly("best_monitor_macro_f1", &TrainResult::best_monitor_macro_f1)
        .def_readonly("epochs_run", &TrainResult::epochs_run)
        .def_readonly("seed", &TrainResult::seed);

    m.def(
        "train",
        [](const PairedDataset& data, const TrainConfig& cfg,
           std::optional<std::pair<Eigen::MatrixXd, std::vector<int>>> monitor) {
            if (!monitor) return train(data, cfg);
            LabeledSet set;
            set.embeddings = std::move(monitor->first);
            set.labels = to_polarities(monitor->second);
            return train(data, cfg, &set);
        },
        py::arg("data"), py::arg("config"), py::arg("external_monitor") = std::nullopt);

    py::class_<EvalMetrics>(m, "EvalMetrics")
        .def_readonly("accuracy", &EvalMetrics::accuracy)
        .def_readonly("macro_f1", &EvalMetrics::macro_f1)
        .def_property_readonly("confusion",
                               [](const EvalMetrics& m2) {
                                   py::list rows;
                                   for (const auto& r : m2.confusion) {
                                       py::list row;
                                       for (long v : r) row.append(v);
                                       rows.append(row);
                                   }
                                   return rows;
                               })
        .def_readonly("n_test", &EvalMetrics::n_test);

    m.def(
        "evaluate",
        [](const ModelParams& params, const Eigen::MatrixXd& E,
           const std::vector<int>& labels) {
            LabeledSet set;
            set.embeddings = E;
            set.labels = to_polarities(labels);
            return evaluate(params, set);
        },
        py::arg("params"), py::arg("embeddings"), py::arg("labels"));
    m.def(
        "predict",
        [](const ModelParams& params, const Eigen::MatrixXd& E) {
            return from_polarities(predict(params, E));
        },
        py::arg("params"), py::arg("embeddings"));
    m.def("mean_pair_cosine", &mean_pair_cosine, py::arg("params"), py::arg("data"));

    // sweep
    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("alpha", &SweepRow::alpha)
        .def_readonly("beta", &SweepRow::beta)
        .def_readonly("accuracy", &SweepRow::accuracy)
        .def_readonly("macro_f1", &SweepRow::macro_f1)
        .def_readonly("epochs_run", &SweepRow::epochs_run)
        .def_readonly("failed", &SweepRow::failed)
        .def_readonly("error", &SweepRow::error);

    m.def(
        "run_sweep",
        [](const PairedDataset& data, const TrainConfig& base, std::vector<double> alphas,
           std::vector<double> betas, int workers) {
            SweepResult r = run_sweep(data, base, std::move(alphas), std::move(betas),
                                      nullptr, workers);
            std::optional<std::size_t> best;
            if (r.best_index != SweepResult::npos) best = r.best_index;
            return py::make_tuple(std::move(r.rows), best);
        },
        py::arg("data"), py::arg("base"), py::arg("alphas"), py::arg("betas"),
        py::arg("workers") = 1);
    m.def("sensitivity_grid", &sensitivity_grid);

    // config
    py::class_<AlphaBeta>(m, "AlphaBeta")
        .def_readonly("alpha", &AlphaBeta::alpha)
        .def_readonly("beta", &AlphaBeta::beta);
    m.def("default_alpha_beta", &default_alpha_beta, py::arg("strategy"));
}
