#include "absaforge/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "absaforge/errors.hpp"
#include "absaforge/text.hpp"

namespace absaforge {

LabeledSet embed_triplets(Encoder& encoder, const std::vector<Triplet>& triplets) {
    LabeledSet set;
    set.embeddings.resize(static_cast<Eigen::Index>(triplets.size()), encoder.dim());
    set.labels.reserve(triplets.size());
    for (std::size_t i = 0; i < triplets.size(); ++i) {
        Eigen::VectorXd e = encoder.encode(triplets[i].sentence, triplets[i].aspect);
        if (e.size() != encoder.dim())
            throw ContractViolation("encoder returned a vector of unexpected size");
        set.embeddings.row(static_cast<Eigen::Index>(i)) = e.transpose();
        set.labels.push_back(triplets[i].polarity);
    }
    return set;
}

PairedDataset build_pairs(const std::vector<Triplet>& triplets,
                          const std::vector<AugmentedSample>& augmented, Encoder& encoder) {
    std::unordered_map<std::string, const Triplet*> by_id;
    by_id.reserve(triplets.size());
    for (const Triplet& t : triplets) by_id.emplace(t.id, &t);

    PairedDataset out;
    const auto n = static_cast<Eigen::Index>(augmented.size());
    out.src.resize(n, encoder.dim());
    out.aug.resize(n, encoder.dim());
    out.labels.reserve(augmented.size());
    out.ids.reserve(augmented.size());

    for (std::size_t i = 0; i < augmented.size(); ++i) {
        const AugmentedSample& a = augmented[i];
        auto it = by_id.find(a.source_id);
        if (it == by_id.end())
            throw ConfigError("augmented sample " + std::to_string(i) +
                              " references unknown source_id '" + a.source_id + "'");
        const Triplet& t = *it->second;
        if (a.polarity != t.polarity)
            throw ValidationError("augmented sample for source_id '" + a.source_id +
                                  "' carries a different polarity than its source");
        out.src.row(static_cast<Eigen::Index>(i)) =
            encoder.encode(t.sentence, t.aspect).transpose();
        out.aug.row(static_cast<Eigen::Index>(i)) =
            encoder.encode(a.aug_sentence, a.aug_aspect).transpose();
        out.labels.push_back(t.polarity);
        out.ids.push_back(t.id);
    }
    return out;
}

void TrainConfig::validate(bool external_monitor) const {
    hp.validate();
    if (projection_dim < 1) throw ConfigError("projection_dim must be >= 1");
    if (!external_monitor && !(holdout_fraction > 0.0 && holdout_fraction <= 0.5))
        throw ConfigError("holdout_fraction must be in (0, 0.5]");
}

namespace {

// Deterministic Fisher-Yates over a splitmix64 stream; avoids the
// implementation-defined draws of std::shuffle.
void seeded_shuffle(std::vector<Eigen::Index>& idx, std::uint64_t& state) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::uint64_t r = splitmix64(state++);
        std::swap(idx[i - 1], idx[r % i]);
    }
}

Batch gather_batch(const Eigen::MatrixXd& rows, const std::vector<Polarity>& labels,
                   const std::vector<Eigen::Index>& order, std::size_t begin,
                   std::size_t end) {
    Batch b;
    b.embeddings.resize(static_cast<Eigen::Index>(end - begin), rows.cols());
    b.labels.reserve(end - begin);
    for (std::size_t k = begin; k < end; ++k) {
        b.embeddings.row(static_cast<Eigen::Index>(k - begin)) = rows.row(order[k]);
        b.labels.push_back(labels[static_cast<std::size_t>(order[k])]);
    }
    return b;
}

}  // namespace

TrainResult train(const PairedDataset& data, const TrainConfig& cfg,
                  const LabeledSet* external_monitor) {
    cfg.validate(external_monitor != nullptr);
    if (data.size() < 1) throw ConfigError("train: paired dataset is empty");
    if (data.aug.rows() != data.src.rows() || data.aug.cols() != data.src.cols())
        throw ContractViolation("train: source/augmented embedding shapes differ");
    if (external_monitor != nullptr && external_monitor->size() < 1)
        throw ConfigError("train: external monitor set is empty");

    const Eigen::Index total = data.size();
    std::vector<Eigen::Index> train_idx;
    LabeledSet monitor;
    if (external_monitor != nullptr) {
        train_idx.resize(static_cast<std::size_t>(total));
        std::iota(train_idx.begin(), train_idx.end(), Eigen::Index{0});
        monitor = *external_monitor;
    } else {
        if (total < 2)
            throw ConfigError("train: need at least 2 pairs to hold out a monitor split");
        auto n_holdout = static_cast<Eigen::Index>(
            static_cast<double>(total) * cfg.holdout_fraction);
        n_holdout = std::clamp<Eigen::Index>(n_holdout, 1, total - 1);

        std::vector<Eigen::Index> perm(static_cast<std::size_t>(total));
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        std::uint64_t split_state = cfg.hp.seed ^ 0x9d53c1f4b3a2e071ULL;
        seeded_shuffle(perm, split_state);

        monitor.embeddings.resize(n_holdout, data.src.cols());
        for (Eigen::Index i = 0; i < n_holdout; ++i) {
            monitor.embeddings.row(i) = data.src.row(perm[static_cast<std::size_t>(i)]);
            monitor.labels.push_back(
                data.labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
        }
        train_idx.assign(perm.begin() + n_holdout, perm.end());
        std::sort(train_idx.begin(), train_idx.end());
    }
    const auto n_train = train_idx.size();
    if (n_train == 0) throw ConfigError("train: no samples left after the monitor split");

    ModelParams params = ModelParams::init(static_cast<int>(data.src.cols()),
                                           cfg.projection_dim, cfg.hp.seed);
    AdamOptimizer opt(cfg.hp.learning_rate);

    std::uint64_t shuffle_state = cfg.hp.seed ^ 0x6a09e667f3bcc908ULL;
    std::mt19937_64 dropout_rng(splitmix64(cfg.hp.seed ^ 0xbb67ae8584caa73bULL));

    TrainResult result;
    result.seed = cfg.hp.seed;
    result.best_monitor_accuracy = -1.0;  // first epoch always becomes the best
    result.best_params = params;

    std::vector<Eigen::Index> order = train_idx;
    const auto batch_size = static_cast<std::size_t>(cfg.hp.batch_size);

    const bool have_ids = data.ids.size() == static_cast<std::size_t>(total);
    const auto batch_ids = [&](std::size_t begin, std::size_t end) {
        std::string s;
        for (std::size_t k = begin; k < end; ++k) {
            s += ' ';
            const auto row = static_cast<std::size_t>(order[k]);
            s += have_ids ? data.ids[row] : "#" + std::to_string(row);
        }
        return s;
    };

    for (int epoch = 1; epoch <= cfg.hp.max_epochs; ++epoch) {
        seeded_shuffle(order, shuffle_state);

        double sum_total = 0.0, sum_ssct = 0.0, sum_cl = 0.0;
        int batch_index = 0;
        for (std::size_t begin = 0; begin < n_train; begin += batch_size, ++batch_index) {
            const std::size_t end = std::min(begin + batch_size, n_train);
            Batch src = gather_batch(data.src, data.labels, order, begin, end);
            Batch aug = gather_batch(data.aug, data.labels, order, begin, end);

            LossBreakdown loss;
            Gradients grads;
            try {
                if (cfg.hp.dropout_rate > 0.0) {
                    Eigen::MatrixXd mask_src = make_dropout_mask(
                        src.embeddings.rows(), src.embeddings.cols(), cfg.hp.dropout_rate,
                        dropout_rng);
                    Eigen::MatrixXd mask_aug = make_dropout_mask(
                        aug.embeddings.rows(), aug.embeddings.cols(), cfg.hp.dropout_rate,
                        dropout_rng);
                    grads = grad_total_loss_masked(src, aug, params, cfg.hp, mask_src, mask_aug,
                                                   &loss);
                } else {
                    grads = grad_total_loss(src, aug, params, cfg.hp, &loss);
                }
            } catch (const ValidationError& e) {
                // Non-finite inputs trip the loss-side finiteness checks before
                // loss.total is even produced. Re-raise with the batch pinned.
                std::ostringstream msg;
                msg << "training diverged: non-finite loss at epoch " << epoch << ", batch "
                    << batch_index << " (ids:" << batch_ids(begin, end) << "): " << e.what();
                throw Error(msg.str());
            }

            if (!std::isfinite(loss.total)) {
                std::ostringstream msg;
                msg << "training diverged: non-finite loss at epoch " << epoch << ", batch "
                    << batch_index << " (ids:" << batch_ids(begin, end) << ')';
                throw Error(msg.str());
            }

            const auto w = static_cast<double>(end - begin);
            sum_total += loss.total * w;
            sum_ssct += loss.ssct * w;
            sum_cl += loss.cl * w;
            opt.step(params, grads);
        }

        EvalMetrics mm = evaluate(params, monitor);

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_total = sum_total / static_cast<double>(n_train);
        rec.train_ssct = sum_ssct / static_cast<double>(n_train);
        rec.train_cl = sum_cl / static_cast<double>(n_train);
        rec.monitor_accuracy = mm.accuracy;
        rec.monitor_macro_f1 = mm.macro_f1;
        rec.best_so_far = mm.accuracy > result.best_monitor_accuracy;
        if (rec.best_so_far) {
            result.best_monitor_accuracy = mm.accuracy;
            result.best_monitor_macro_f1 = mm.macro_f1;
            result.best_epoch = epoch;
            result.best_params = params;
        }
        result.history.push_back(rec);

        if (epoch - result.best_epoch >= cfg.hp.patience) break;
    }
    result.epochs_run = static_cast<int>(result.history.size());
    return result;
}

Polarity predict_one(const ModelParams& params, const Eigen::VectorXd& e) {
    const ForwardResult f = forward(params, e);
    int best = 0;
    for (int c = 1; c < 3; ++c)
        if (f.logits(c) > f.logits(best)) best = c;
    return polarity_from_index(best);
}

std::vector<Polarity> predict(const ModelParams& params, const Eigen::MatrixXd& E) {
    BatchForward f = forward_batch(params, E);
    std::vector<Polarity> out;
    out.reserve(static_cast<std::size_t>(E.rows()));
    for (Eigen::Index i = 0; i < E.rows(); ++i) {
        int best = 0;
        for (int c = 1; c < 3; ++c)
            if (f.logits(i, c) > f.logits(i, best)) best = c;
        out.push_back(polarity_from_index(best));
    }
    return out;
}

Polarity predict_triplet(const ModelParams& params, Encoder& encoder, const Triplet& t) {
    return predict_one(params, encoder.encode(t.sentence, t.aspect));
}

EvalMetrics evaluate(const ModelParams& params, const LabeledSet& test) {
    if (test.size() < 1) throw ValidationError("evaluate: test set is empty");
    if (test.labels.size() != static_cast<std::size_t>(test.size()))
        throw ContractViolation("evaluate: label count does not match embeddings");

    const std::vector<Polarity> preds = predict(params, test.embeddings);
    EvalMetrics m;
    m.n_test = static_cast<long>(test.size());
    long correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const int g = class_index(test.labels[i]);
        const int p = class_index(preds[i]);
        m.confusion[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)] += 1;
        if (g == p) ++correct;
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(m.n_test);

    double f1_sum = 0.0;
    for (int c = 0; c < 3; ++c) {
        long tp = m.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
        long fp = 0, fn = 0;
        for (int o = 0; o < 3; ++o) {
            if (o == c) continue;
            fp += m.confusion[static_cast<std::size_t>(o)][static_cast<std::size_t>(c)];
            fn += m.confusion[static_cast<std::size_t>(c)][static_cast<std::size_t>(o)];
        }
        const double precision =
            tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        const double recall =
            tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        f1_sum += precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall)
                                           : 0.0;
    }
    m.macro_f1 = f1_sum / 3.0;
    return m;
}

EvalMetrics evaluate(const ModelParams& params, Encoder& encoder,
                     const std::vector<Triplet>& test) {
    return evaluate(params, embed_triplets(encoder, test));
}

double mean_pair_cosine(const ModelParams& params, const PairedDataset& data) {
    if (data.size() < 1) throw ContractViolation("mean_pair_cosine: empty dataset");
    BatchForward f_src = forward_batch(params, data.src);
    BatchForward f_aug = forward_batch(params, data.aug);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        const double n = f_src.H.row(i).norm();
        const double m = f_aug.H.row(i).norm();
        if (n == 0.0 || m == 0.0) continue;
        sum += f_src.H.row(i).dot(f_aug.H.row(i)) / (n * m);
    }
    return sum / static_cast<double>(data.size());
}

}  // namespace absaforge
