#include "absaforge/model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "absaforge/errors.hpp"

namespace absaforge {

using json = nlohmann::ordered_json;

ModelParams ModelParams::init(int d, int p, std::uint64_t seed) {
    if (d < 1 || p < 1) throw ContractViolation("ModelParams::init: dims must be positive");
    ModelParams params;
    params.W_p.resize(d, p);
    params.b_p = Eigen::VectorXd::Zero(p);
    params.W_s.resize(p, 3);
    params.b_s = Eigen::VectorXd::Zero(3);

    std::mt19937_64 rng(seed);
    auto fill_glorot = [&rng](Eigen::MatrixXd& w) {
        const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
        std::uniform_real_distribution<double> dist(-limit, limit);
        // explicit row-major walk so layout changes cannot alter the draw order
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = dist(rng);
    };
    fill_glorot(params.W_p);
    fill_glorot(params.W_s);
    return params;
}

void ModelParams::check_shapes() const {
    const auto d = W_p.rows(), p = W_p.cols();
    if (d < 1 || p < 1) throw ContractViolation("model: empty parameter matrices");
    if (b_p.size() != p) throw ContractViolation("model: b_p size does not match projection");
    if (W_s.rows() != p || W_s.cols() != 3)
        throw ContractViolation("model: W_s must be projection_dim x 3");
    if (b_s.size() != 3) throw ContractViolation("model: b_s must have 3 entries");
}

Gradients Gradients::zeros(int d, int p) {
    Gradients g;
    g.W_p = Eigen::MatrixXd::Zero(d, p);
    g.b_p = Eigen::VectorXd::Zero(p);
    g.W_s = Eigen::MatrixXd::Zero(p, 3);
    g.b_s = Eigen::VectorXd::Zero(3);
    return g;
}

void Hyperparams::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be >= 0");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("tau must be > 0");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("learning_rate must be > 0");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
    if (patience < 0) throw ConfigError("patience must be >= 0");
    if (patience > max_epochs) throw ConfigError("patience must not exceed max_epochs");
    if (!(dropout_rate >= 0.0) || !(dropout_rate < 1.0))
        throw ConfigError("dropout_rate must be in [0, 1)");
}

ForwardResult forward(const ModelParams& params, const Eigen::VectorXd& e) {
    params.check_shapes();
    if (e.size() != params.W_p.rows())
        throw ContractViolation("forward: embedding size does not match W_p");
    ForwardResult out;
    out.h = (params.W_p.transpose() * e + params.b_p).array().tanh();
    out.logits = params.W_s.transpose() * out.h + params.b_s;
    return out;
}

BatchForward forward_batch(const ModelParams& params, const Eigen::MatrixXd& E,
                           const Eigen::MatrixXd* mask) {
    params.check_shapes();
    if (E.cols() != params.W_p.rows())
        throw ContractViolation("forward_batch: embedding width does not match W_p");
    Eigen::MatrixXd inputs;
    if (mask != nullptr) {
        if (mask->rows() != E.rows() || mask->cols() != E.cols())
            throw ContractViolation("forward_batch: dropout mask shape mismatch");
        inputs = E.cwiseProduct(*mask);
    } else {
        inputs = E;
    }
    BatchForward out;
    out.H = ((inputs * params.W_p).rowwise() + params.b_p.transpose()).array().tanh();
    out.logits = (out.H * params.W_s).rowwise() + params.b_s.transpose();
    return out;
}

Eigen::MatrixXd make_dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                                  std::mt19937_64& rng) {
    if (!(rate >= 0.0) || !(rate < 1.0))
        throw ContractViolation("dropout rate must be in [0, 1)");
    Eigen::MatrixXd mask(rows, cols);
    const double keep_scale = 1.0 / (1.0 - rate);
    std::bernoulli_distribution drop(rate);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) mask(i, j) = drop(rng) ? 0.0 : keep_scale;
    return mask;
}

namespace {

// log(sum_j exp(v_j)) with max subtraction; input must be finite.
double log_sum_exp(const Eigen::VectorXd& v) {
    const double m = v.maxCoeff();
    return m + std::log((v.array() - m).exp().sum());
}

void require_finite_logits(const Eigen::VectorXd& logits) {
    if (!logits.allFinite())
        throw ValidationError("cross-entropy: logits contain a non-finite value");
}

// Row softmax with max subtraction.
Eigen::MatrixXd row_softmax(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd p(logits.rows(), logits.cols());
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
        const Eigen::VectorXd row = logits.row(i);
        const double m = row.maxCoeff();
        Eigen::VectorXd ex = (row.array() - m).exp();
        p.row(i) = ex / ex.sum();
    }
    return p;
}

void check_batch_pair(const Batch& src, const Batch& aug, const ModelParams& params) {
    const auto n = src.size();
    if (n < 1) throw ContractViolation("loss: batch must contain at least one sample");
    if (aug.size() != n)
        throw ContractViolation("loss: source and augmented batches differ in size");
    if (src.labels.size() != static_cast<std::size_t>(n) ||
        aug.labels.size() != static_cast<std::size_t>(n))
        throw ContractViolation("loss: label count does not match batch size");
    if (src.embeddings.cols() != params.W_p.rows() ||
        aug.embeddings.cols() != params.W_p.rows())
        throw ContractViolation("loss: embedding width does not match model input dim");
    for (std::size_t i = 0; i < src.labels.size(); ++i)
        if (src.labels[i] != aug.labels[i])
            throw ContractViolation("loss: augmented label differs from source at row " +
                                    std::to_string(i));
}

// InfoNCE value plus d(loss)/dS where S = C/tau; shared by loss and grad paths.
double info_nce_core(const Eigen::MatrixXd& H, const Eigen::MatrixXd& Hp, double tau,
                     Eigen::MatrixXd* C_out, Eigen::VectorXd* n_out, Eigen::VectorXd* m_out,
                     Eigen::MatrixXd* dS_out) {
    if (!(tau > 0.0)) throw ContractViolation("info_nce: tau must be positive");
    const auto n_rows = H.rows();
    if (n_rows < 1) throw ContractViolation("info_nce: need at least one row");
    if (Hp.rows() != n_rows || Hp.cols() != H.cols())
        throw ContractViolation("info_nce: representation shapes differ");

    Eigen::VectorXd n = H.rowwise().norm();
    Eigen::VectorXd m = Hp.rowwise().norm();
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        if (n(i) == 0.0)
            throw ValidationError("info_nce: zero-norm source representation at row " +
                                  std::to_string(i));
        if (m(i) == 0.0)
            throw ValidationError("info_nce: zero-norm augmented representation at row " +
                                  std::to_string(i));
    }

    Eigen::MatrixXd C = (H.array().colwise() / n.array()).matrix() *
                        (Hp.array().colwise() / m.array()).matrix().transpose();
    Eigen::MatrixXd S = C / tau;

    double loss = 0.0;
    Eigen::MatrixXd P = row_softmax(S);
    for (Eigen::Index i = 0; i < n_rows; ++i)
        loss += log_sum_exp(S.row(i)) - S(i, i);
    loss /= static_cast<double>(n_rows);

    if (dS_out != nullptr) {
        *dS_out = P;
        dS_out->diagonal().array() -= 1.0;
        *dS_out /= static_cast<double>(n_rows);
    }
    if (C_out != nullptr) *C_out = std::move(C);
    if (n_out != nullptr) *n_out = std::move(n);
    if (m_out != nullptr) *m_out = std::move(m);
    return loss;
}

struct LossGradResult {
    LossBreakdown loss;
    Gradients grads;
};

// Single forward/backward over an aligned (source, augmented) batch.
// Dropout masks are optional; `want_grads` skips the backward pass.
LossGradResult loss_and_grad(const Batch& src, const Batch& aug, const ModelParams& params,
                             const Hyperparams& hp, const Eigen::MatrixXd* mask_src,
                             const Eigen::MatrixXd* mask_aug, bool want_grads) {
    params.check_shapes();
    hp.validate();
    check_batch_pair(src, aug, params);
    const auto N = src.size();
    const double inv_n = 1.0 / static_cast<double>(N);

    Eigen::MatrixXd in_src =
        mask_src != nullptr ? src.embeddings.cwiseProduct(*mask_src) : src.embeddings;
    Eigen::MatrixXd in_aug =
        mask_aug != nullptr ? aug.embeddings.cwiseProduct(*mask_aug) : aug.embeddings;
    if (mask_src != nullptr &&
        (mask_src->rows() != N || mask_src->cols() != src.embeddings.cols()))
        throw ContractViolation("loss: source dropout mask shape mismatch");
    if (mask_aug != nullptr &&
        (mask_aug->rows() != N || mask_aug->cols() != aug.embeddings.cols()))
        throw ContractViolation("loss: augmented dropout mask shape mismatch");

    BatchForward f_src = forward_batch(params, in_src, nullptr);
    BatchForward f_aug = forward_batch(params, in_aug, nullptr);

    // supervised part
    double ssct = 0.0;
    for (Eigen::Index i = 0; i < N; ++i) {
        require_finite_logits(f_src.logits.row(i));
        require_finite_logits(f_aug.logits.row(i));
        const int y = class_index(src.labels[static_cast<std::size_t>(i)]);
        ssct += log_sum_exp(f_src.logits.row(i)) - f_src.logits(i, y);
        ssct += hp.alpha * (log_sum_exp(f_aug.logits.row(i)) - f_aug.logits(i, y));
    }
    ssct *= inv_n;

    // contrastive part, reported even when beta weighs it out of the total
    Eigen::MatrixXd C, dS;
    Eigen::VectorXd norm_src, norm_aug;
    const double cl = info_nce_core(f_src.H, f_aug.H, hp.tau, &C, &norm_src, &norm_aug,
                                    want_grads ? &dS : nullptr);

    LossGradResult out;
    out.loss.ssct = ssct;
    out.loss.cl = cl;
    out.loss.total = ssct + hp.beta * cl;
    if (!want_grads) return out;

    // d(total)/d(logits)
    Eigen::MatrixXd gl_src = row_softmax(f_src.logits);
    Eigen::MatrixXd gl_aug = row_softmax(f_aug.logits);
    for (Eigen::Index i = 0; i < N; ++i) {
        const int y = class_index(src.labels[static_cast<std::size_t>(i)]);
        gl_src(i, y) -= 1.0;
        gl_aug(i, y) -= 1.0;
    }
    gl_src *= inv_n;
    gl_aug *= hp.alpha * inv_n;

    Eigen::MatrixXd dH_src = gl_src * params.W_s.transpose();
    Eigen::MatrixXd dH_aug = gl_aug * params.W_s.transpose();

    if (hp.beta != 0.0) {
        // d(beta * cl)/dC, then cosine backprop into the unnormalized rows
        Eigen::MatrixXd gC = (hp.beta / hp.tau) * dS;
        Eigen::MatrixXd A = gC.array() / (norm_src * norm_aug.transpose()).array();
        Eigen::VectorXd row_dot = (gC.array() * C.array()).rowwise().sum();
        Eigen::VectorXd col_dot = (gC.array() * C.array()).colwise().sum();
        dH_src += A * f_aug.H;
        dH_src -= ((row_dot.array() / norm_src.array().square()).matrix().asDiagonal() *
                   f_src.H);
        dH_aug += A.transpose() * f_src.H;
        dH_aug -= ((col_dot.array() / norm_aug.array().square()).matrix().asDiagonal() *
                   f_aug.H);
    }

    out.grads = Gradients::zeros(params.input_dim(), params.hidden_dim());
    out.grads.W_s = f_src.H.transpose() * gl_src + f_aug.H.transpose() * gl_aug;
    out.grads.b_s = (gl_src + gl_aug).colwise().sum();

    Eigen::MatrixXd dZ_src = dH_src.array() * (1.0 - f_src.H.array().square());
    Eigen::MatrixXd dZ_aug = dH_aug.array() * (1.0 - f_aug.H.array().square());
    out.grads.W_p = in_src.transpose() * dZ_src + in_aug.transpose() * dZ_aug;
    out.grads.b_p = (dZ_src + dZ_aug).colwise().sum();
    return out;
}

}  // namespace

double ce_loss(const Eigen::VectorXd& logits, Polarity label) {
    if (logits.size() != 3) throw ContractViolation("ce_loss: expected 3 logits");
    require_finite_logits(logits);
    return log_sum_exp(logits) - logits(class_index(label));
}

double ssct_loss(const Batch& src, const Batch& aug, const ModelParams& params, double alpha) {
    Hyperparams hp;
    hp.alpha = alpha;
    hp.beta = 0.0;
    LossGradResult r = loss_and_grad(src, aug, params, hp, nullptr, nullptr, false);
    return r.loss.ssct;
}

double info_nce(const Eigen::MatrixXd& H, const Eigen::MatrixXd& H_aug, double tau) {
    return info_nce_core(H, H_aug, tau, nullptr, nullptr, nullptr, nullptr);
}

LossBreakdown total_loss(const Batch& src, const Batch& aug, const ModelParams& params,
                         const Hyperparams& hp) {
    return loss_and_grad(src, aug, params, hp, nullptr, nullptr, false).loss;
}

LossBreakdown total_loss_masked(const Batch& src, const Batch& aug, const ModelParams& params,
                                const Hyperparams& hp, const Eigen::MatrixXd& mask_src,
                                const Eigen::MatrixXd& mask_aug) {
    return loss_and_grad(src, aug, params, hp, &mask_src, &mask_aug, false).loss;
}

Gradients grad_total_loss(const Batch& src, const Batch& aug, const ModelParams& params,
                          const Hyperparams& hp, LossBreakdown* loss_out) {
    LossGradResult r = loss_and_grad(src, aug, params, hp, nullptr, nullptr, true);
    if (loss_out != nullptr) *loss_out = r.loss;
    return std::move(r.grads);
}

Gradients grad_total_loss_masked(const Batch& src, const Batch& aug, const ModelParams& params,
                                 const Hyperparams& hp, const Eigen::MatrixXd& mask_src,
                                 const Eigen::MatrixXd& mask_aug, LossBreakdown* loss_out) {
    LossGradResult r = loss_and_grad(src, aug, params, hp, &mask_src, &mask_aug, true);
    if (loss_out != nullptr) *loss_out = r.loss;
    return std::move(r.grads);
}

AdamOptimizer::AdamOptimizer(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    if (!(lr > 0.0)) throw ContractViolation("adam: learning rate must be positive");
}

void AdamOptimizer::step(ModelParams& params, const Gradients& grads) {
    params.check_shapes();
    if (!initialized_) {
        m_ = Gradients::zeros(params.input_dim(), params.hidden_dim());
        v_ = Gradients::zeros(params.input_dim(), params.hidden_dim());
        initialized_ = true;
    }
    if (m_.W_p.rows() != params.W_p.rows() || m_.W_p.cols() != params.W_p.cols())
        throw ContractViolation("adam: parameter shapes changed between steps");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));

    auto update = [&](Eigen::Ref<Eigen::MatrixXd> p, const Eigen::MatrixXd& g,
                      Eigen::MatrixXd& m, Eigen::MatrixXd& v) {
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
        p -= (lr_ * (m / bc1).array() / ((v / bc2).array().sqrt() + eps_)).matrix();
    };
    auto update_vec = [&](Eigen::Ref<Eigen::VectorXd> p, const Eigen::VectorXd& g,
                          Eigen::VectorXd& m, Eigen::VectorXd& v) {
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
        p -= (lr_ * (m / bc1).array() / ((v / bc2).array().sqrt() + eps_)).matrix();
    };
    update(params.W_p, grads.W_p, m_.W_p, v_.W_p);
    update_vec(params.b_p, grads.b_p, m_.b_p, v_.b_p);
    update(params.W_s, grads.W_s, m_.W_s, v_.W_s);
    update_vec(params.b_s, grads.b_s, m_.b_s, v_.b_s);
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows, const char* name) {
    if (!rows.is_array() || rows.empty() || !rows.front().is_array())
        throw SchemaError(std::string("checkpoint: field '") + name +
                          "' must be an array of rows");
    const auto n_cols = rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(n_cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != n_cols)
            throw SchemaError(std::string("checkpoint: ragged rows in field '") + name + "'");
        for (std::size_t j = 0; j < n_cols; ++j) {
            if (!row[j].is_number())
                throw SchemaError(std::string("checkpoint: non-numeric entry in '") + name +
                                  "'");
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                row[j].get<double>();
        }
    }
    if (!m.allFinite())
        throw SchemaError(std::string("checkpoint: non-finite value in field '") + name + "'");
    return m;
}

Eigen::VectorXd vector_from_json(const json& arr, const char* name) {
    if (!arr.is_array())
        throw SchemaError(std::string("checkpoint: field '") + name + "' must be an array");
    Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
            throw SchemaError(std::string("checkpoint: non-numeric entry in '") + name + "'");
        v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    }
    if (!v.allFinite())
        throw SchemaError(std::string("checkpoint: non-finite value in field '") + name + "'");
    return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    ckpt.params.check_shapes();
    json doc;
    doc["format_version"] = 1;
    doc["seed"] = ckpt.seed;
    doc["encoder"] = {{"kind", ckpt.encoder.kind},
                      {"dim", ckpt.encoder.dim},
                      {"seed", ckpt.encoder.seed},
                      {"endpoint", ckpt.encoder.endpoint},
                      {"model", ckpt.encoder.model}};
    // fixed polarity -> class index mapping, recorded for self-description
    doc["label_map"] = {{"negative", 0}, {"neutral", 1}, {"positive", 2}};
    doc["input_dim"] = ckpt.params.input_dim();
    doc["projection_dim"] = ckpt.params.hidden_dim();
    doc["hyperparams"] = {{"alpha", ckpt.hyperparams.alpha},
                          {"beta", ckpt.hyperparams.beta},
                          {"tau", ckpt.hyperparams.tau},
                          {"learning_rate", ckpt.hyperparams.learning_rate},
                          {"batch_size", ckpt.hyperparams.batch_size},
                          {"max_epochs", ckpt.hyperparams.max_epochs},
                          {"patience", ckpt.hyperparams.patience},
                          {"dropout_rate", ckpt.hyperparams.dropout_rate},
                          {"seed", ckpt.hyperparams.seed}};
    doc["W_p"] = matrix_to_json(ckpt.params.W_p);
    doc["b_p"] = vector_to_json(ckpt.params.b_p);
    doc["W_s"] = matrix_to_json(ckpt.params.W_s);
    doc["b_s"] = vector_to_json(ckpt.params.b_s);

    std::ofstream out(path);
    if (!out) throw Error("cannot open checkpoint file for writing: " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw Error("failed writing checkpoint: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open checkpoint file: " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw SchemaError("checkpoint: invalid JSON in " + path.string());

    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer())
        throw SchemaError("checkpoint: missing format_version");
    if (doc["format_version"].get<int>() != 1)
        throw SchemaError("checkpoint: unsupported format_version " +
                          doc["format_version"].dump());
    const json expected_map = {{"negative", 0}, {"neutral", 1}, {"positive", 2}};
    if (!doc.contains("label_map") || json(doc["label_map"]) != expected_map)
        throw SchemaError("checkpoint: label_map does not match the fixed class mapping");

    Checkpoint ckpt;
    ckpt.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("encoder")) {
        const json& e = doc["encoder"];
        ckpt.encoder.kind = e.value("kind", std::string("hash"));
        ckpt.encoder.dim = e.value("dim", 256);
        ckpt.encoder.seed = e.value("seed", std::uint64_t{42});
        ckpt.encoder.endpoint = e.value("endpoint", std::string());
        ckpt.encoder.model = e.value("model", std::string());
    }
    if (doc.contains("hyperparams")) {
        const json& h = doc["hyperparams"];
        ckpt.hyperparams.alpha = h.value("alpha", ckpt.hyperparams.alpha);
        ckpt.hyperparams.beta = h.value("beta", ckpt.hyperparams.beta);
        ckpt.hyperparams.tau = h.value("tau", ckpt.hyperparams.tau);
        ckpt.hyperparams.learning_rate =
            h.value("learning_rate", ckpt.hyperparams.learning_rate);
        ckpt.hyperparams.batch_size = h.value("batch_size", ckpt.hyperparams.batch_size);
        ckpt.hyperparams.max_epochs = h.value("max_epochs", ckpt.hyperparams.max_epochs);
        ckpt.hyperparams.patience = h.value("patience", ckpt.hyperparams.patience);
        ckpt.hyperparams.dropout_rate =
            h.value("dropout_rate", ckpt.hyperparams.dropout_rate);
        ckpt.hyperparams.seed = h.value("seed", ckpt.hyperparams.seed);
    }
    for (const char* key : {"W_p", "b_p", "W_s", "b_s"})
        if (!doc.contains(key))
            throw SchemaError(std::string("checkpoint: missing field '") + key + "'");
    ckpt.params.W_p = matrix_from_json(doc["W_p"], "W_p");
    ckpt.params.b_p = vector_from_json(doc["b_p"], "b_p");
    ckpt.params.W_s = matrix_from_json(doc["W_s"], "W_s");
    ckpt.params.b_s = vector_from_json(doc["b_s"], "b_s");
    ckpt.params.check_shapes();

    if (doc.contains("input_dim") &&
        doc["input_dim"].get<int>() != ckpt.params.input_dim())
        throw SchemaError("checkpoint: input_dim does not match W_p");
    if (doc.contains("projection_dim") &&
        doc["projection_dim"].get<int>() != ckpt.params.hidden_dim())
        throw SchemaError("checkpoint: projection_dim does not match W_p");
    return ckpt;
}

}  // namespace absaforge
