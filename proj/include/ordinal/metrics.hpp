#pragma once

#include <cstdint>
#include <vector>

namespace ordinal {

/// Q x Q counts, rows = true class, columns = predicted class.
struct ConfusionMatrix {
    int q_classes = 0;
    std::vector<std::int64_t> counts;  // row-major

    explicit ConfusionMatrix(int q);
    std::int64_t& at(int true_class, int predicted);
    std::int64_t at(int true_class, int predicted) const;
    std::int64_t row_sum(int i) const;
    std::int64_t col_sum(int j) const;
    std::int64_t total() const;
};

/// Per-sample probabilities (rows normalized) plus true labels.
struct BatchProbabilities {
    std::size_t n_samples = 0;
    int q_classes = 0;
    std::vector<double> probs;  // row-major n x Q
    std::vector<int> labels;

    double at(std::size_t k, int q) const { return probs[k * q_classes + q]; }
    double& at(std::size_t k, int q) { return probs[k * q_classes + q]; }
    /// Shapes, label ranges and finiteness only.
    void validate_shape() const;
    /// validate_shape plus nonnegativity and row normalization within 1e-9.
    void validate() const;
};

ConfusionMatrix confusion_from_predictions(const std::vector<int>& labels,
                                           const std::vector<int>& predictions,
                                           int q_classes);

/// MS: minimum per-class recall over classes that actually occur.
double minimum_sensitivity(const ConfusionMatrix& confusion);

/// MAE = (1/N) sum |i-j| O_ij.
double mean_absolute_error(const ConfusionMatrix& confusion);

/// trace(O)/N.
double ccr(const ConfusionMatrix& confusion);

/// Fraction of samples whose true label is among the k most probable classes.
/// Probability ties rank the lower class index first.
double top_k_ccr(const BatchProbabilities& batch, int k);

/// (1/N) sum over |i-j| <= 1 of O_ij.
double one_off_accuracy(const ConfusionMatrix& confusion);

struct EvaluationReport {
    double qwk = 0.0;
    bool qwk_defined = true;  // false when Eq. (1) denominator degenerates
    double ms = 0.0;
    double mae = 0.0;
    double ccr = 0.0;
    double top2 = 0.0;
    double top3 = 0.0;
    double one_off = 0.0;
    ConfusionMatrix confusion{2};
};

/// Full metric suite; hard-label metrics from `predictions`, Top-k from probs.
EvaluationReport evaluate_all(const BatchProbabilities& batch,
                              const std::vector<int>& predictions);

}  // namespace ordinal
