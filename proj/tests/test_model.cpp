#include <doctest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "absaforge/errors.hpp"
#include "absaforge/model.hpp"
#include "support/fd_check.hpp"
#include "support/paths.hpp"

using namespace absaforge;
using testsupport::random_batch_pair;
using testsupport::TempDir;

namespace {

Eigen::VectorXd logits3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

// Stacks each batch on top of itself.
Batch duplicate(const Batch& b) {
    Batch out;
    out.embeddings.resize(2 * b.embeddings.rows(), b.embeddings.cols());
    out.embeddings << b.embeddings, b.embeddings;
    out.labels = b.labels;
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    return out;
}

}  // namespace

TEST_CASE("glorot init is bounded, zero-biased and seed-deterministic") {
    const auto params = ModelParams::init(20, 8, 42);
    CHECK(params.input_dim() == 20);
    CHECK(params.hidden_dim() == 8);
    CHECK(params.b_p.isZero());
    CHECK(params.b_s.isZero());
    CHECK(params.W_p.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / (20 + 8)));
    CHECK(params.W_s.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / (8 + 3)));
    CHECK(params.W_p.cwiseAbs().maxCoeff() > 0.0);

    const auto same = ModelParams::init(20, 8, 42);
    CHECK((params.W_p - same.W_p).norm() == 0.0);
    CHECK((params.W_s - same.W_s).norm() == 0.0);
    const auto other = ModelParams::init(20, 8, 43);
    CHECK((params.W_p - other.W_p).norm() > 0.0);

    CHECK_THROWS_AS(ModelParams::init(0, 8, 1), ContractViolation);
}

TEST_CASE("hyperparameter validation") {
    Hyperparams hp;
    hp.validate();  // the defaults are valid

    auto expect_reject = [](auto&& mutate) {
        Hyperparams bad;
        mutate(bad);
        CHECK_THROWS_AS(bad.validate(), ConfigError);
    };
    expect_reject([](Hyperparams& h) { h.alpha = -0.1; });
    expect_reject([](Hyperparams& h) { h.beta = -1.0; });
    expect_reject([](Hyperparams& h) { h.tau = 0.0; });
    expect_reject([](Hyperparams& h) { h.learning_rate = 0.0; });
    expect_reject([](Hyperparams& h) { h.batch_size = 0; });
    expect_reject([](Hyperparams& h) { h.max_epochs = 0; });
    expect_reject([](Hyperparams& h) { h.patience = -1; });
    expect_reject([](Hyperparams& h) { h.patience = h.max_epochs + 1; });
    expect_reject([](Hyperparams& h) { h.dropout_rate = 1.0; });
}

TEST_CASE("cross entropy matches hand-computed values") {
    // Uniform logits: every class is equally likely.
    CHECK(ce_loss(logits3(0, 0, 0), Polarity::negative) ==
          doctest::Approx(1.0986122886681098).epsilon(1e-12));
    CHECK(ce_loss(logits3(5, 5, 5), Polarity::positive) ==
          doctest::Approx(1.0986122886681098).epsilon(1e-12));
    // ln(e^1 + e^2 + e^0.5) - 2
    CHECK(ce_loss(logits3(1, 2, 0.5), Polarity::neutral) ==
          doctest::Approx(0.4643687841079447).epsilon(1e-12));
    // A confident correct prediction costs little, a wrong one a lot.
    CHECK(ce_loss(logits3(10, 0, 0), Polarity::negative) < 1e-4);
    CHECK(ce_loss(logits3(10, 0, 0), Polarity::positive) > 9.0);
    // Shift invariance.
    CHECK(ce_loss(logits3(101, 102, 100.5), Polarity::neutral) ==
          doctest::Approx(0.4643687841079447).epsilon(1e-9));

    CHECK_THROWS_AS(ce_loss(Eigen::VectorXd::Zero(4), Polarity::neutral), ContractViolation);
    CHECK_THROWS_AS(ce_loss(logits3(1, std::nan(""), 0), Polarity::neutral), ValidationError);
    CHECK_THROWS_AS(
        ce_loss(logits3(1, std::numeric_limits<double>::infinity(), 0), Polarity::neutral),
        ValidationError);
}

TEST_CASE("contrastive loss identities") {
    SUBCASE("a single pair costs exactly zero") {
        Eigen::MatrixXd h(1, 4), hp(1, 4);
        h << 1, 2, 3, 4;
        hp << -1, 0.5, 2, 0;
        CHECK(info_nce(h, hp, 0.08) == 0.0);
    }
    SUBCASE("all-identical rows cost ln N") {
        for (const int n : {2, 3, 5}) {
            Eigen::MatrixXd h(n, 3);
            for (int i = 0; i < n; ++i) h.row(i) << 0.3, -1.2, 0.7;
            CHECK(info_nce(h, h, 0.08) ==
                  doctest::Approx(std::log(double(n))).epsilon(1e-9));
        }
    }
    SUBCASE("orthogonal negatives at tau 1 cost ln(1 + 1/e)") {
        Eigen::MatrixXd h = Eigen::MatrixXd::Identity(2, 2);
        CHECK(info_nce(h, h, 1.0) ==
              doctest::Approx(0.31326168751822286).epsilon(1e-12));
    }
    SUBCASE("cosine makes the loss invariant to positive row scaling") {
        auto [src, aug] = random_batch_pair(5, 6, 11);
        const double base = info_nce(src.embeddings, aug.embeddings, 0.08);
        Eigen::MatrixXd h2 = src.embeddings, hp2 = aug.embeddings;
        const double scales[] = {2.7, 0.03, 14.0, 0.5, 1.0};
        for (int i = 0; i < 5; ++i) {
            h2.row(i) *= scales[i];
            hp2.row(i) *= scales[4 - i];
        }
        CHECK(info_nce(h2, hp2, 0.08) == doctest::Approx(base).epsilon(1e-9));
    }
    SUBCASE("mismatched pairs cost more than aligned ones") {
        auto [src, aug] = random_batch_pair(6, 8, 3);
        const double aligned = info_nce(src.embeddings, src.embeddings, 0.08);
        const double shuffled = info_nce(src.embeddings, aug.embeddings, 0.08);
        CHECK(aligned < shuffled);
    }
}

TEST_CASE("contrastive loss input validation") {
    Eigen::MatrixXd h(2, 3), hp(2, 3);
    h << 1, 0, 0, 0, 1, 0;
    hp = h;
    CHECK_THROWS_AS(info_nce(h, hp, 0.0), ContractViolation);
    CHECK_THROWS_AS(info_nce(h, hp, -1.0), ContractViolation);

    Eigen::MatrixXd narrow(2, 2);
    narrow.setOnes();
    CHECK_THROWS_AS(info_nce(h, narrow, 0.08), ContractViolation);

    hp.row(1).setZero();
    try {
        info_nce(h, hp, 0.08);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
        CHECK(std::string(e.what()).find("augmented") != std::string::npos);
    }
}

TEST_CASE("supervised loss equals a per-sample cross-entropy average") {
    const auto [src, aug] = random_batch_pair(7, 10, 5);
    const auto params = ModelParams::init(10, 6, 1);
    const double alpha = 0.6;

    double expected = 0.0;
    for (int i = 0; i < 7; ++i) {
        const auto f_src = forward(params, src.embeddings.row(i).transpose());
        const auto f_aug = forward(params, aug.embeddings.row(i).transpose());
        expected += ce_loss(f_src.logits, src.labels[size_t(i)]) +
                    alpha * ce_loss(f_aug.logits, src.labels[size_t(i)]);
    }
    expected /= 7.0;
    CHECK(ssct_loss(src, aug, params, alpha) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("batched forward agrees with the single-sample forward") {
    const auto [src, aug] = random_batch_pair(4, 9, 8);
    const auto params = ModelParams::init(9, 5, 2);
    const auto batch = forward_batch(params, src.embeddings);
    for (int i = 0; i < 4; ++i) {
        const auto single = forward(params, src.embeddings.row(i).transpose());
        CHECK((batch.H.row(i).transpose() - single.h).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((batch.logits.row(i).transpose() - single.logits).cwiseAbs().maxCoeff() < 1e-12);
    }
    CHECK(batch.H.cwiseAbs().maxCoeff() <= 1.0);  // tanh range
}

TEST_CASE("total loss composes the two parts") {
    const auto [src, aug] = random_batch_pair(6, 8, 21);
    const auto params = ModelParams::init(8, 4, 3);

    Hyperparams hp;
    hp.alpha = 0.2;
    hp.beta = 0.4;
    const auto breakdown = total_loss(src, aug, params, hp);
    CHECK(breakdown.total == doctest::Approx(breakdown.ssct + 0.4 * breakdown.cl).epsilon(1e-15));
    CHECK(breakdown.ssct == doctest::Approx(ssct_loss(src, aug, params, 0.2)).epsilon(1e-12));
    CHECK(breakdown.cl > 0.0);

    SUBCASE("beta zero reduces the total to the supervised part bitwise") {
        Hyperparams off = hp;
        off.beta = 0.0;
        const auto b = total_loss(src, aug, params, off);
        CHECK(b.total == b.ssct);
        CHECK(b.cl > 0.0);  // still reported for the logs
    }
    SUBCASE("duplicating the batch adds exactly beta times ln 2") {
        const auto b2 = total_loss(duplicate(src), duplicate(aug), params, hp);
        CHECK(b2.ssct == doctest::Approx(breakdown.ssct).epsilon(1e-12));
        CHECK(b2.cl == doctest::Approx(breakdown.cl + std::log(2.0)).epsilon(1e-12));
        CHECK(b2.total ==
              doctest::Approx(breakdown.total + hp.beta * std::log(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("batch pair validation") {
    auto [src, aug] = random_batch_pair(3, 5, 1);
    const auto params = ModelParams::init(5, 4, 1);
    const Hyperparams hp;

    Batch empty;
    empty.embeddings.resize(0, 5);
    CHECK_THROWS_AS(total_loss(empty, empty, params, hp), ContractViolation);

    Batch short_aug = aug;
    short_aug.embeddings = aug.embeddings.topRows(2);
    short_aug.labels.resize(2);
    CHECK_THROWS_AS(total_loss(src, short_aug, params, hp), ContractViolation);

    Batch mislabeled = aug;
    mislabeled.labels[1] = Polarity::negative;
    try {
        total_loss(src, mislabeled, params, hp);
        FAIL("expected ContractViolation");
    } catch (const ContractViolation& e) {
        CHECK(std::string(e.what()).find("row 1") != std::string::npos);
    }

    Batch wide = src;
    wide.embeddings.resize(3, 6);
    wide.embeddings.setOnes();
    CHECK_THROWS_AS(total_loss(wide, aug, params, hp), ContractViolation);
}

TEST_CASE("analytic gradients match finite differences") {
    const auto params = ModelParams::init(6, 4, 17);
    const auto [src, aug] = random_batch_pair(3, 6, 29);

    const double configs[][2] = {{0.2, 0.4}, {0.0, 1.0}, {0.6, 0.0}, {1.0, 0.2}};
    for (const auto& [alpha, beta] : configs) {
        CAPTURE(alpha);
        CAPTURE(beta);
        Hyperparams hp;
        hp.alpha = alpha;
        hp.beta = beta;
        CHECK(testsupport::max_relative_gradient_error(src, aug, params, hp) < 1e-4);
    }
}

TEST_CASE("masked gradients match finite differences through the same mask") {
    const auto params = ModelParams::init(6, 4, 23);
    const auto [src, aug] = random_batch_pair(3, 6, 31);
    Hyperparams hp;
    hp.alpha = 0.2;
    hp.beta = 0.4;

    std::mt19937_64 rng(9);
    const Eigen::MatrixXd mask_src = make_dropout_mask(3, 6, 0.25, rng);
    const Eigen::MatrixXd mask_aug = make_dropout_mask(3, 6, 0.25, rng);
    CHECK(testsupport::max_relative_gradient_error(src, aug, params, hp, &mask_src, &mask_aug) <
          1e-4);

    // The masked loss really is a different function when entries drop.
    REQUIRE(mask_src.minCoeff() == 0.0);
    const double open = total_loss(src, aug, params, hp).total;
    const double masked = total_loss_masked(src, aug, params, hp, mask_src, mask_aug).total;
    CHECK(open != masked);
}

TEST_CASE("gradient of a duplicated batch is unchanged") {
    const auto params = ModelParams::init(5, 4, 7);
    const auto [src, aug] = random_batch_pair(4, 5, 13);
    Hyperparams hp;
    hp.alpha = 0.3;
    hp.beta = 0.7;

    const Gradients g = grad_total_loss(src, aug, params, hp);
    const Gradients g2 = grad_total_loss(duplicate(src), duplicate(aug), params, hp);
    CHECK(g2.W_p.isApprox(g.W_p, 1e-12));
    CHECK(g2.b_p.isApprox(g.b_p, 1e-12));
    CHECK(g2.W_s.isApprox(g.W_s, 1e-12));
    CHECK(g2.b_s.isApprox(g.b_s, 1e-12));
}

TEST_CASE("dropout masks are inverted and seed-deterministic") {
    std::mt19937_64 rng(4);
    const auto mask = make_dropout_mask(200, 100, 0.25, rng);
    double zeros = 0;
    for (Eigen::Index i = 0; i < mask.rows(); ++i)
        for (Eigen::Index j = 0; j < mask.cols(); ++j) {
            const double v = mask(i, j);
            CHECK((v == 0.0 || v == doctest::Approx(1.0 / 0.75)));
            if (v == 0.0) ++zeros;
        }
    CHECK(zeros / (200.0 * 100.0) == doctest::Approx(0.25).epsilon(0.1));

    std::mt19937_64 rng_a(4), rng_b(4);
    CHECK((make_dropout_mask(20, 10, 0.5, rng_a) - make_dropout_mask(20, 10, 0.5, rng_b))
              .norm() == 0.0);

    std::mt19937_64 rng_c(4);
    CHECK(make_dropout_mask(30, 10, 0.0, rng_c).isOnes());
    CHECK_THROWS_AS(make_dropout_mask(2, 2, 1.0, rng_c), ContractViolation);
}

TEST_CASE("adam takes signed unit-scale first steps and is deterministic") {
    auto params = ModelParams::init(4, 3, 1);
    const auto before = params;
    Gradients g = Gradients::zeros(4, 3);
    g.W_p.setOnes();
    g.b_s << -2.0, 0.0, 3.0;

    AdamOptimizer opt(0.1);
    opt.step(params, g);
    // First step moves each coordinate by lr / (1 + eps) against the gradient.
    CHECK((before.W_p - params.W_p).maxCoeff() == doctest::Approx(0.1).epsilon(1e-6));
    CHECK((before.W_p - params.W_p).minCoeff() == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(params.b_s(0) == doctest::Approx(0.1).epsilon(1e-6));   // moved up against -2
    CHECK(params.b_s(1) == 0.0);                                  // untouched at zero grad
    CHECK(params.b_s(2) == doctest::Approx(-0.1).epsilon(1e-6));  // moved down against +3
    CHECK((before.W_s - params.W_s).norm() == 0.0);

    // Same gradient stream, same trajectory.
    auto p1 = ModelParams::init(6, 4, 9);
    auto p2 = ModelParams::init(6, 4, 9);
    AdamOptimizer o1(0.01), o2(0.01);
    for (int step = 0; step < 5; ++step) {
        Gradients gs = Gradients::zeros(6, 4);
        gs.W_p.setConstant(0.1 * (step + 1));
        gs.W_s.setConstant(-0.2);
        o1.step(p1, gs);
        o2.step(p2, gs);
    }
    CHECK((p1.W_p - p2.W_p).norm() == 0.0);
    CHECK((p1.W_s - p2.W_s).norm() == 0.0);

    // Moment buffers are keyed to the shapes of the first step.
    auto other_shape = ModelParams::init(8, 2, 1);
    CHECK_THROWS_AS(o1.step(other_shape, Gradients::zeros(8, 2)), ContractViolation);
}

TEST_CASE("adam descends the loss it is fed") {
    const auto [src, aug] = random_batch_pair(6, 8, 2);
    auto params = ModelParams::init(8, 4, 5);
    Hyperparams hp;
    hp.alpha = 0.2;
    hp.beta = 0.4;
    const double initial = total_loss(src, aug, params, hp).total;
    AdamOptimizer opt(0.01);
    for (int i = 0; i < 50; ++i) opt.step(params, grad_total_loss(src, aug, params, hp));
    CHECK(total_loss(src, aug, params, hp).total < initial);
}

TEST_CASE("checkpoints round-trip exactly") {
    TempDir tmp("ckpt");
    const auto path = tmp / "checkpoint.json";

    Checkpoint ckpt;
    ckpt.params = ModelParams::init(5, 4, 3);
    ckpt.params.b_p.setConstant(0.125);
    ckpt.encoder.kind = "hash";
    ckpt.encoder.dim = 5;
    ckpt.encoder.seed = 77;
    ckpt.hyperparams.alpha = 0.6;
    ckpt.hyperparams.beta = 0.5;
    ckpt.hyperparams.batch_size = 16;
    ckpt.seed = 1234;
    save_checkpoint(path, ckpt);

    const Checkpoint loaded = load_checkpoint(path);
    CHECK((loaded.params.W_p - ckpt.params.W_p).norm() == 0.0);
    CHECK((loaded.params.b_p - ckpt.params.b_p).norm() == 0.0);
    CHECK((loaded.params.W_s - ckpt.params.W_s).norm() == 0.0);
    CHECK((loaded.params.b_s - ckpt.params.b_s).norm() == 0.0);
    CHECK(loaded.encoder == ckpt.encoder);
    CHECK(loaded.hyperparams.alpha == 0.6);
    CHECK(loaded.hyperparams.beta == 0.5);
    CHECK(loaded.hyperparams.batch_size == 16);
    CHECK(loaded.seed == 1234);
}

TEST_CASE("checkpoint tampering is caught") {
    TempDir tmp("ckpt-bad");
    const auto path = tmp / "checkpoint.json";
    Checkpoint ckpt;
    ckpt.params = ModelParams::init(4, 3, 1);
    save_checkpoint(path, ckpt);

    const auto rewrite = [&](auto&& mutate) {
        std::ifstream in(path);
        nlohmann::json doc = nlohmann::json::parse(in);
        in.close();
        mutate(doc);
        std::ofstream(path) << doc.dump();
    };

    SUBCASE("wrong format version") {
        rewrite([](nlohmann::json& d) { d["format_version"] = 2; });
        CHECK_THROWS_AS(load_checkpoint(path), SchemaError);
    }
    SUBCASE("label map drift") {
        rewrite([](nlohmann::json& d) { d["label_map"]["negative"] = 2; });
        CHECK_THROWS_AS(load_checkpoint(path), SchemaError);
    }
    SUBCASE("missing parameter block") {
        rewrite([](nlohmann::json& d) { d.erase("W_s"); });
        try {
            load_checkpoint(path);
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("W_s") != std::string::npos);
        }
    }
    SUBCASE("ragged matrix") {
        rewrite([](nlohmann::json& d) { d["W_p"][1].erase(2); });
        CHECK_THROWS_AS(load_checkpoint(path), SchemaError);
    }
    SUBCASE("non-numeric entry") {
        rewrite([](nlohmann::json& d) { d["b_s"][0] = "zero"; });
        CHECK_THROWS_AS(load_checkpoint(path), SchemaError);
    }
    SUBCASE("declared dimension mismatch") {
        rewrite([](nlohmann::json& d) { d["input_dim"] = 9; });
        CHECK_THROWS_AS(load_checkpoint(path), SchemaError);
    }
    SUBCASE("truncated file") {
        std::ofstream(path) << "{\"format_version\": 1";
        CHECK_THROWS_AS(load_checkpoint(path), SchemaError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_checkpoint(tmp / "nowhere.json"), Error);
    }
}
