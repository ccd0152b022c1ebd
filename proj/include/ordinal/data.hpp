#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ordinal/link.hpp"

namespace ordinal {

struct Dataset {
    int q_classes = 2;
    int n_features = 0;
    std::vector<double> features;  // row-major N x d
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * static_cast<std::size_t>(n_features),
                static_cast<std::size_t>(n_features)};
    }
    void validate() const;
};

/// Latent-variable generator spec: y* = w.x + eps, label = interval of y* in
/// true_thresholds; eps follows the noise family matching the link.
struct SyntheticSpec {
    int n_samples = 0;
    int n_features = 0;
    int q_classes = 2;
    LinkFunction link = LinkFunction::Logit;
    std::vector<double> true_weights;
    std::vector<double> true_thresholds;  // strictly increasing, length Q-1
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticGroundTruth {
    std::vector<double> weights;
    std::vector<double> thresholds;
    LinkFunction link = LinkFunction::Logit;
    std::uint64_t seed = 0;
};

/// Throws GenerationError if any class ends up empty.
Dataset generate_synthetic(const SyntheticSpec& spec,
                           SyntheticGroundTruth* ground_truth = nullptr);

/// Standard benchmarks frozen for the synthetic-recovery experiments.
SyntheticSpec recovery_benchmark_q3(int n_samples, std::uint64_t seed);
SyntheticSpec imbalanced_benchmark_q5(int n_samples, std::uint64_t seed);

/// CSV schema: header f0,...,f{d-1},label; labels zero-based integers.
Dataset load_csv(const std::filesystem::path& path);
void save_csv(const Dataset& dataset, const std::filesystem::path& path);

void save_ground_truth(const SyntheticGroundTruth& truth, const std::filesystem::path& path);
SyntheticGroundTruth load_ground_truth(const std::filesystem::path& path);

struct SplitFractions {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

struct Splits {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Deterministic stratified partition.
Splits split(const Dataset& dataset, const SplitFractions& fractions, std::uint64_t seed);

struct TrainValSplit {
    Dataset train;
    Dataset val;
};

/// Stratified two-way partition (training front ends that hold out only a
/// validation set).
TrainValSplit split_train_val(const Dataset& dataset, double val_fraction, std::uint64_t seed);

/// Random oversampling with replacement up to the majority-class count.
Dataset balance_oversample(const Dataset& dataset, std::uint64_t seed);

std::vector<std::int64_t> class_counts(const Dataset& dataset);

}  // namespace ordinal
