#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "ordinal/trainer.hpp"

namespace ordinal {

inline constexpr std::array<const char*, 7> kGridMetricNames = {
    "qwk", "ms", "mae", "ccr", "top2", "top3", "one_off"};

/// Factor grid: link x initial LR x batch size, repeated runs per cell.
/// "nominal" is admitted as a pseudo-link level for the baseline comparison.
struct GridSpec {
    std::vector<std::string> links;
    std::vector<double> etas;
    std::vector<int> batch_sizes;
    int runs_per_cell = 5;
    std::uint64_t base_seed = 0;

    void validate() const;
};

struct GridRunRecord {
    std::string link;
    double eta = 0.0;
    int batch_size = 0;
    int run_index = 0;
    std::uint64_t seed = 0;
    bool diverged = false;
    EvaluationReport report;

    std::array<double, 7> metric_values() const;
};

struct GridCellSummary {
    std::string link;
    double eta = 0.0;
    int batch_size = 0;
    int n_runs = 0;
    int n_diverged = 0;
    std::array<double, 7> mean{};
    std::array<double, 7> sd{};
    std::array<int, 7> n_defined{};  // runs contributing to each metric
};

struct GridResult {
    std::vector<GridRunRecord> runs;       // row-major over sorted cells
    std::vector<GridCellSummary> summary;  // lexicographic over (link, eta, batch)
};

/// Trains every cell runs_per_cell times (seeds base_seed + run index) on the
/// given splits and evaluates on the test split. `threads` caps parallel runs.
GridResult run_grid(const GridSpec& spec, const TrainingConfig& base_config,
                    const Splits& splits, int threads = 1);

/// Mean/SD over runs with a defined value; sample SD (n-1), 0 when n = 1.
GridCellSummary summarize_cell(const std::vector<GridRunRecord>& cell_runs);

std::string grid_runs_to_csv(const GridResult& result);
std::string grid_summary_to_csv(const GridResult& result);
/// Paper-style table: one Mean_SD column per metric.
std::string grid_table(const GridResult& result);

void save_grid(const GridResult& result, const std::filesystem::path& out_dir);

}  // namespace ordinal
