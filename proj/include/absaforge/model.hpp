#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "absaforge/corpus.hpp"
#include "absaforge/encoder.hpp"

namespace absaforge {

// Trainable head over the frozen encoder: a tanh projection producing the
// representation h, and a linear 3-class classifier over h.
//   h      = tanh(W_p^T e + b_p)
//   logits = W_s^T h + b_s
struct ModelParams {
    Eigen::MatrixXd W_p;  // d x p
    Eigen::VectorXd b_p;  // p
    Eigen::MatrixXd W_s;  // p x 3
    Eigen::VectorXd b_s;  // 3

    int input_dim() const { return static_cast<int>(W_p.rows()); }
    int hidden_dim() const { return static_cast<int>(W_p.cols()); }

    // Glorot-uniform weights, zero biases, deterministic per seed.
    static ModelParams init(int d, int p, std::uint64_t seed);

    void check_shapes() const;  // throws ContractViolation on inconsistency
};

struct Gradients {
    Eigen::MatrixXd W_p;
    Eigen::VectorXd b_p;
    Eigen::MatrixXd W_s;
    Eigen::VectorXd b_s;

    static Gradients zeros(int d, int p);
};

struct Hyperparams {
    double alpha = 0.2;        // augmented cross-entropy weight
    double beta = 0.4;         // contrastive loss weight
    double tau = 0.08;         // contrastive similarity temperature
    double learning_rate = 2e-5;
    int batch_size = 32;
    int max_epochs = 50;
    int patience = 10;
    double dropout_rate = 0.1;
    std::uint64_t seed = 42;

    void validate() const;
};

// One mini-batch: a row per sample plus its label.
struct Batch {
    Eigen::MatrixXd embeddings;  // N x d
    std::vector<Polarity> labels;

    Eigen::Index size() const { return embeddings.rows(); }
};

struct ForwardResult {
    Eigen::VectorXd h;       // p
    Eigen::VectorXd logits;  // 3
};

struct BatchForward {
    Eigen::MatrixXd H;       // N x p
    Eigen::MatrixXd logits;  // N x 3
};

// Eval-mode forward pass (no dropout).
ForwardResult forward(const ModelParams& params, const Eigen::VectorXd& e);

// Batched forward. `mask`, when given, is an N x d multiplicative dropout
// mask applied to the embeddings (training passes only).
BatchForward forward_batch(const ModelParams& params, const Eigen::MatrixXd& E,
                           const Eigen::MatrixXd* mask = nullptr);

// Inverted-dropout mask: entries are 0 with probability `rate`, else
// 1/(1-rate), so eval-mode activations need no rescaling.
Eigen::MatrixXd make_dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                                  std::mt19937_64& rng);

// Softmax cross-entropy with natural log, max-subtraction stabilized.
// Throws on non-finite logits.
double ce_loss(const Eigen::VectorXd& logits, Polarity label);

// Mean over the batch of CE(source) + alpha * CE(augmented), both through the
// eval-mode forward pass. Batches must be index-aligned and non-empty.
double ssct_loss(const Batch& src, const Batch& aug, const ModelParams& params, double alpha);

// InfoNCE over cosine similarities: the denominator for row i sums
// exp(cos(h_i, h_j+)/tau) over all N augmented rows, including j == i.
// Throws on a zero-norm row (naming it) and on tau <= 0.
double info_nce(const Eigen::MatrixXd& H, const Eigen::MatrixXd& H_aug, double tau);

struct LossBreakdown {
    double total = 0.0;
    double ssct = 0.0;
    double cl = 0.0;
};

// total = ssct + beta * cl over the same batch's representations.
// Eval mode (no dropout); bitwise reproducible for identical inputs.
LossBreakdown total_loss(const Batch& src, const Batch& aug, const ModelParams& params,
                         const Hyperparams& hp);

// Training-mode variant with explicit per-call dropout masks (N x d each).
LossBreakdown total_loss_masked(const Batch& src, const Batch& aug, const ModelParams& params,
                                const Hyperparams& hp, const Eigen::MatrixXd& mask_src,
                                const Eigen::MatrixXd& mask_aug);

// Analytic gradients of the total loss with respect to every parameter.
// With masks, the fixed per-call mask matches the masked forward.
Gradients grad_total_loss(const Batch& src, const Batch& aug, const ModelParams& params,
                          const Hyperparams& hp, LossBreakdown* loss_out = nullptr);
Gradients grad_total_loss_masked(const Batch& src, const Batch& aug, const ModelParams& params,
                                 const Hyperparams& hp, const Eigen::MatrixXd& mask_src,
                                 const Eigen::MatrixXd& mask_aug,
                                 LossBreakdown* loss_out = nullptr);

// Adam with bias correction; moment buffers keyed to the parameter shapes.
class AdamOptimizer {
public:
    explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999,
                           double eps = 1e-8);

    void step(ModelParams& params, const Gradients& grads);

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    Gradients m_ = Gradients::zeros(0, 0);
    Gradients v_ = Gradients::zeros(0, 0);
    bool initialized_ = false;
};

// --- checkpoints ---------------------------------------------------------
//
// Self-describing JSON file: format version, encoder spec, label mapping and
// all parameter matrices in row-major order.

struct Checkpoint {
    ModelParams params;
    EncoderSpec encoder;
    Hyperparams hyperparams;
    std::uint64_t seed = 0;
};

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace absaforge
