#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "absaforge/augment.hpp"
#include "absaforge/corpus.hpp"
#include "absaforge/encoder.hpp"
#include "absaforge/model.hpp"

namespace absaforge {

// Embeddings plus gold labels, one row per sample.
struct LabeledSet {
    Eigen::MatrixXd embeddings;
    std::vector<Polarity> labels;

    Eigen::Index size() const { return embeddings.rows(); }
};

// Index-aligned (source, augmentation) pairs ready for the loss.
struct PairedDataset {
    Eigen::MatrixXd src;
    Eigen::MatrixXd aug;
    std::vector<Polarity> labels;
    std::vector<std::string> ids;  // source triplet ids, for diagnostics

    Eigen::Index size() const { return src.rows(); }
};

LabeledSet embed_triplets(Encoder& encoder, const std::vector<Triplet>& triplets);

// Joins augmented samples to their source triplets by source_id and encodes
// both sides. Unresolvable source_id -> ConfigError before any training;
// polarity disagreement -> ValidationError naming the sample.
PairedDataset build_pairs(const std::vector<Triplet>& triplets,
                          const std::vector<AugmentedSample>& augmented, Encoder& encoder);

struct TrainConfig {
    Hyperparams hp;
    int projection_dim = 64;
    // Fraction of the paired data held out for early stopping when no
    // external monitor set is given. Must lie in (0, 0.5].
    double holdout_fraction = 0.1;

    void validate(bool external_monitor) const;
};

struct EpochRecord {
    int epoch = 0;  // 1-based
    double train_total = 0.0;
    double train_ssct = 0.0;
    double train_cl = 0.0;
    double monitor_accuracy = 0.0;
    double monitor_macro_f1 = 0.0;
    bool best_so_far = false;
};

struct TrainResult {
    ModelParams best_params;       // parameters at the best monitor epoch
    std::vector<EpochRecord> history;
    int best_epoch = 0;            // 1-based
    double best_monitor_accuracy = 0.0;
    double best_monitor_macro_f1 = 0.0;
    int epochs_run = 0;
    std::uint64_t seed = 0;
};

// Mini-batch Adam training of the combined objective with early stopping on
// monitor accuracy. Stops at max_epochs or once `patience` epochs pass
// without strict improvement; patience 0 therefore runs exactly one epoch.
// Deterministic given the seed. Non-finite loss aborts, naming the batch ids.
TrainResult train(const PairedDataset& data, const TrainConfig& cfg,
                  const LabeledSet* external_monitor = nullptr);

// Argmax over eval-mode logits; ties resolve to the lowest class index,
// i.e. negative before neutral before positive.
Polarity predict_one(const ModelParams& params, const Eigen::VectorXd& e);
std::vector<Polarity> predict(const ModelParams& params, const Eigen::MatrixXd& E);
Polarity predict_triplet(const ModelParams& params, Encoder& encoder, const Triplet& t);

struct EvalMetrics {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    // rows = gold class index, columns = predicted class index
    std::array<std::array<long, 3>, 3> confusion{};
    long n_test = 0;
};

// accuracy = correct/total; macro-F1 = unweighted mean of the three per-class
// F1 scores, each 0 when precision + recall is 0. Empty input -> error.
EvalMetrics evaluate(const ModelParams& params, const LabeledSet& test);
EvalMetrics evaluate(const ModelParams& params, Encoder& encoder,
                     const std::vector<Triplet>& test);

// Mean cosine between each pair's representations, eval mode. Diagnostic for
// the alignment property; zero-norm rows contribute 0.
double mean_pair_cosine(const ModelParams& params, const PairedDataset& data);

}  // namespace absaforge
