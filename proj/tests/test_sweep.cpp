#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "absaforge/augment.hpp"
#include "absaforge/encoder.hpp"
#include "absaforge/errors.hpp"
#include "absaforge/gateway.hpp"
#include "absaforge/mock_backend.hpp"
#include "absaforge/sweep.hpp"
#include "support/toy_corpus.hpp"

using namespace absaforge;

namespace {

struct SweepFixture {
    std::vector<Triplet> corpus;
    std::unique_ptr<Encoder> encoder;
    PairedDataset data;
    LabeledSet monitor;
    TrainConfig base;

    SweepFixture() {
        corpus = testsupport::make_toy_corpus(30, 21);
        auto backend = std::make_shared<MockBackend>(6, domain::restaurant);
        Gateway gw(backend);
        auto samples = run_augmentation(corpus, gw, Strategy{StrategyKind::CADA, false});
        EncoderSpec spec;
        spec.dim = 32;
        encoder = make_encoder(spec);
        data = build_pairs(corpus, samples, *encoder);
        monitor = embed_triplets(*encoder, testsupport::make_toy_corpus(15, 55));

        base.hp.learning_rate = 1e-2;
        base.hp.batch_size = 16;
        base.hp.max_epochs = 4;
        base.hp.patience = 4;
        base.projection_dim = 16;
    }
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool rows_equal(const SweepRow& a, const SweepRow& b) {
    const bool metrics_equal =
        (a.accuracy == b.accuracy || (std::isnan(a.accuracy) && std::isnan(b.accuracy))) &&
        (a.macro_f1 == b.macro_f1 || (std::isnan(a.macro_f1) && std::isnan(b.macro_f1)));
    return a.alpha == b.alpha && a.beta == b.beta && metrics_equal &&
           a.epochs_run == b.epochs_run && a.failed == b.failed;
}

}  // namespace

TEST_CASE("sensitivity grid spans 0.1 through 1.0 in tenths") {
    const std::vector<double> grid = sensitivity_grid();
    REQUIRE(grid.size() == 10);
    for (int i = 0; i < 10; ++i) CHECK(grid[static_cast<std::size_t>(i)] == (i + 1) / 10.0);
}

TEST_CASE("a 1x1 sweep reproduces a plain training run") {
    SweepFixture fx;
    SweepResult sr = run_sweep(fx.data, fx.base, {0.2}, {0.4}, &fx.monitor);
    REQUIRE(sr.rows.size() == 1);
    CHECK(sr.best_index == 0);

    TrainConfig cfg = fx.base;
    cfg.hp.alpha = 0.2;
    cfg.hp.beta = 0.4;
    TrainResult direct = train(fx.data, cfg, &fx.monitor);
    CHECK(sr.rows[0].accuracy == direct.best_monitor_accuracy);
    CHECK(sr.rows[0].macro_f1 == direct.best_monitor_macro_f1);
    CHECK(sr.rows[0].epochs_run == direct.epochs_run);
    CHECK_FALSE(sr.rows[0].failed);
}

TEST_CASE("rows come out sorted by alpha then beta even from unsorted grids") {
    SweepFixture fx;
    SweepResult sr = run_sweep(fx.data, fx.base, {0.4, 0.2}, {0.3, 0.1}, &fx.monitor);
    REQUIRE(sr.rows.size() == 4);
    CHECK(sr.rows[0].alpha == 0.2);
    CHECK(sr.rows[0].beta == 0.1);
    CHECK(sr.rows[1].alpha == 0.2);
    CHECK(sr.rows[1].beta == 0.3);
    CHECK(sr.rows[2].alpha == 0.4);
    CHECK(sr.rows[2].beta == 0.1);
    CHECK(sr.rows[3].alpha == 0.4);
    CHECK(sr.rows[3].beta == 0.3);
}

TEST_CASE("sweeps are deterministic and worker count does not change results") {
    SweepFixture fx;
    const std::vector<double> alphas = {0.1, 0.5, 0.9};
    const std::vector<double> betas = {0.2, 0.8};

    SweepResult a = run_sweep(fx.data, fx.base, alphas, betas, &fx.monitor, 1);
    SweepResult b = run_sweep(fx.data, fx.base, alphas, betas, &fx.monitor, 1);
    SweepResult c = run_sweep(fx.data, fx.base, alphas, betas, &fx.monitor, 4);
    REQUIRE(a.rows.size() == 6);
    REQUIRE(b.rows.size() == 6);
    REQUIRE(c.rows.size() == 6);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(rows_equal(a.rows[i], b.rows[i]));
        CHECK(rows_equal(a.rows[i], c.rows[i]));
    }
    CHECK(a.best_index == b.best_index);
    CHECK(a.best_index == c.best_index);

    const auto dir = std::filesystem::temp_directory_path() / "absaforge-sweep-test";
    std::filesystem::create_directories(dir);
    write_sweep_csv(dir / "a.csv", a.rows);
    write_sweep_csv(dir / "c.csv", c.rows);
    CHECK(slurp(dir / "a.csv") == slurp(dir / "c.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("best_index is the first row attaining the maximum accuracy") {
    SweepFixture fx;
    SweepResult sr = run_sweep(fx.data, fx.base, {0.2, 0.6, 1.0}, {0.2, 0.6, 1.0},
                               &fx.monitor, 2);
    REQUIRE(sr.best_index != SweepResult::npos);
    const double best_acc = sr.rows[sr.best_index].accuracy;
    for (std::size_t i = 0; i < sr.rows.size(); ++i) {
        CHECK(sr.rows[i].accuracy <= best_acc);
        if (i < sr.best_index) CHECK(sr.rows[i].accuracy < best_acc);
    }
}

TEST_CASE("a failing grid point becomes a nan row and the sweep continues") {
    SweepFixture fx;
    // negative alpha fails hyperparameter validation inside the point run
    SweepResult sr = run_sweep(fx.data, fx.base, {-0.5, 0.2}, {0.1}, &fx.monitor);
    REQUIRE(sr.rows.size() == 2);
    CHECK(sr.rows[0].failed);
    CHECK(std::isnan(sr.rows[0].accuracy));
    CHECK(std::isnan(sr.rows[0].macro_f1));
    CHECK(sr.rows[0].epochs_run == 0);
    CHECK_FALSE(sr.rows[0].error.empty());
    CHECK_FALSE(sr.rows[1].failed);
    CHECK(sr.best_index == 1);

    const auto dir = std::filesystem::temp_directory_path() / "absaforge-sweep-nan";
    std::filesystem::create_directories(dir);
    write_sweep_csv(dir / "rows.csv", sr.rows);
    const std::string csv = slurp(dir / "rows.csv");
    CHECK(csv.find("-0.5,0.1,nan,nan,0\n") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("when every point fails there is no best index") {
    SweepFixture fx;
    SweepResult sr = run_sweep(fx.data, fx.base, {-1.0, -0.5}, {-0.2}, &fx.monitor);
    REQUIRE(sr.rows.size() == 2);
    CHECK(sr.rows[0].failed);
    CHECK(sr.rows[1].failed);
    CHECK(sr.best_index == SweepResult::npos);
}

TEST_CASE("sweep CSV has the pinned header and shortest round-trip numbers") {
    SweepRow row;
    row.alpha = 0.2;
    row.beta = 0.1;
    row.accuracy = 0.75;
    row.macro_f1 = 0.5;
    row.epochs_run = 3;

    const auto dir = std::filesystem::temp_directory_path() / "absaforge-sweep-csv";
    std::filesystem::create_directories(dir);
    write_sweep_csv(dir / "one.csv", {row});
    CHECK(slurp(dir / "one.csv") ==
          "alpha,beta,accuracy,macro_f1,epochs_run\n0.2,0.1,0.75,0.5,3\n");

    write_sweep_csv(dir / "empty.csv", {});
    CHECK(slurp(dir / "empty.csv") == "alpha,beta,accuracy,macro_f1,epochs_run\n");
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(write_sweep_csv(dir / "missing-dir" / "x.csv", {row}), Error);
}

TEST_CASE("sweep rejects empty grids and bad worker counts") {
    SweepFixture fx;
    CHECK_THROWS_AS(run_sweep(fx.data, fx.base, {}, {0.1}, &fx.monitor), ConfigError);
    CHECK_THROWS_AS(run_sweep(fx.data, fx.base, {0.1}, {}, &fx.monitor), ConfigError);
    CHECK_THROWS_AS(run_sweep(fx.data, fx.base, {0.1}, {0.1}, &fx.monitor, 0), ConfigError);
}
