#include "absaforge/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>
#include <thread>

#include "absaforge/errors.hpp"

namespace absaforge {

std::vector<double> sensitivity_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 10; ++i) grid.push_back(static_cast<double>(i) / 10.0);
    return grid;
}

namespace {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    // json's double printer emits the shortest round-trip form ("0.2", not
    // "0.20000000000000001")
    return nlohmann::json(v).dump();
}

SweepRow run_point(double alpha, double beta, const PairedDataset& data,
                   const TrainConfig& base, const LabeledSet* external_monitor) {
    SweepRow row;
    row.alpha = alpha;
    row.beta = beta;
    try {
        TrainConfig cfg = base;
        cfg.hp.alpha = alpha;
        cfg.hp.beta = beta;
        TrainResult r = train(data, cfg, external_monitor);
        row.accuracy = r.best_monitor_accuracy;
        row.macro_f1 = r.best_monitor_macro_f1;
        row.epochs_run = r.epochs_run;
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.accuracy = std::numeric_limits<double>::quiet_NaN();
        row.macro_f1 = std::numeric_limits<double>::quiet_NaN();
        row.epochs_run = 0;
    }
    return row;
}

}  // namespace

SweepResult run_sweep(const PairedDataset& data, const TrainConfig& base,
                      std::vector<double> alphas, std::vector<double> betas,
                      const LabeledSet* external_monitor, int workers) {
    if (alphas.empty() || betas.empty())
        throw ConfigError("sweep: alpha and beta grids must be non-empty");
    if (workers < 1) throw ConfigError("sweep: workers must be >= 1");
    std::sort(alphas.begin(), alphas.end());
    std::sort(betas.begin(), betas.end());

    struct Point {
        double alpha, beta;
    };
    std::vector<Point> points;
    points.reserve(alphas.size() * betas.size());
    for (double a : alphas)
        for (double b : betas) points.push_back({a, b});

    SweepResult result;
    result.rows.resize(points.size());

    const auto n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(workers), points.size());
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            result.rows[i] =
                run_point(points[i].alpha, points[i].beta, data, base, external_monitor);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= points.size()) return;
                result.rows[i] = run_point(points[i].alpha, points[i].beta, data, base,
                                           external_monitor);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const SweepRow& row = result.rows[i];
        if (row.failed) continue;
        if (result.best_index == SweepResult::npos ||
            row.accuracy > result.rows[result.best_index].accuracy)
            result.best_index = i;
    }
    return result;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open sweep CSV for writing: " + path.string());
    out << "alpha,beta,accuracy,macro_f1,epochs_run\n";
    for (const SweepRow& row : rows) {
        out << format_number(row.alpha) << ',' << format_number(row.beta) << ','
            << format_number(row.accuracy) << ',' << format_number(row.macro_f1) << ','
            << row.epochs_run << '\n';
    }
    if (!out) throw Error("failed writing sweep CSV: " + path.string());
}

}  // namespace absaforge
