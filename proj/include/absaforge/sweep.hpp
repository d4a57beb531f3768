#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "absaforge/train.hpp"

namespace absaforge {

struct SweepRow {
    double alpha = 0.0;
    double beta = 0.0;
    double accuracy = 0.0;   // best-epoch monitor accuracy; NaN when failed
    double macro_f1 = 0.0;   // monitor macro-F1 at that epoch; NaN when failed
    int epochs_run = 0;
    bool failed = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;                 // ordered by (alpha, beta)
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t best_index = npos;              // argmax accuracy; npos if all failed
};

// The grid values used for the sensitivity analysis: 0.1 through 1.0.
std::vector<double> sensitivity_grid();

// Trains one model per (alpha, beta) grid point with the same seed and data,
// recording monitor metrics. A failing point becomes a failed row (metrics
// NaN) and the sweep continues. Points may run on `workers` threads; each
// training run stays single-threaded, so results are order-independent.
SweepResult run_sweep(const PairedDataset& data, const TrainConfig& base,
                      std::vector<double> alphas, std::vector<double> betas,
                      const LabeledSet* external_monitor = nullptr, int workers = 1);

// CSV with the fixed header alpha,beta,accuracy,macro_f1,epochs_run.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

}  // namespace absaforge
