#include "ordinal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "ordinal/errors.hpp"
#include "ordinal/losses.hpp"

namespace ordinal {

ConfusionMatrix::ConfusionMatrix(int q) : q_classes(q) {
    if (q < 2) throw DomainError("ConfusionMatrix: q_classes must be >= 2");
    counts.assign(static_cast<std::size_t>(q) * q, 0);
}

std::int64_t& ConfusionMatrix::at(int i, int j) { return counts[i * q_classes + j]; }
std::int64_t ConfusionMatrix::at(int i, int j) const { return counts[i * q_classes + j]; }

std::int64_t ConfusionMatrix::row_sum(int i) const {
    std::int64_t s = 0;
    for (int j = 0; j < q_classes; ++j) s += at(i, j);
    return s;
}

std::int64_t ConfusionMatrix::col_sum(int j) const {
    std::int64_t s = 0;
    for (int i = 0; i < q_classes; ++i) s += at(i, j);
    return s;
}

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

void BatchProbabilities::validate_shape() const {
    if (n_samples == 0) throw DomainError("BatchProbabilities: empty batch");
    if (q_classes < 2) throw DomainError("BatchProbabilities: q_classes must be >= 2");
    if (probs.size() != n_samples * static_cast<std::size_t>(q_classes))
        throw DomainError("BatchProbabilities: probs shape mismatch");
    if (labels.size() != n_samples)
        throw DomainError("BatchProbabilities: labels length mismatch");
    for (int t : labels)
        if (t < 0 || t >= q_classes)
            throw DomainError("BatchProbabilities: label out of range");
    for (double p : probs)
        if (!std::isfinite(p)) throw DomainError("BatchProbabilities: non-finite probability");
}

void BatchProbabilities::validate() const {
    validate_shape();
    for (std::size_t k = 0; k < n_samples; ++k) {
        double row = 0.0;
        for (int q = 0; q < q_classes; ++q) {
            if (at(k, q) < 0.0) throw DomainError("BatchProbabilities: negative probability");
            row += at(k, q);
        }
        if (std::abs(row - 1.0) > 1e-9)
            throw DomainError("BatchProbabilities: row not normalized");
    }
}

ConfusionMatrix confusion_from_predictions(const std::vector<int>& labels,
                                           const std::vector<int>& predictions,
                                           int q_classes) {
    if (labels.size() != predictions.size())
        throw DomainError("confusion_from_predictions: length mismatch");
    ConfusionMatrix cm(q_classes);
    for (std::size_t k = 0; k < labels.size(); ++k) {
        const int t = labels[k];
        const int p = predictions[k];
        if (t < 0 || t >= q_classes || p < 0 || p >= q_classes)
            throw DomainError("confusion_from_predictions: class out of range");
        ++cm.at(t, p);
    }
    return cm;
}

double minimum_sensitivity(const ConfusionMatrix& confusion) {
    double ms = 2.0;
    for (int q = 0; q < confusion.q_classes; ++q) {
        const std::int64_t n_q = confusion.row_sum(q);
        if (n_q == 0) continue;  // absent classes excluded from the min
        ms = std::min(ms, static_cast<double>(confusion.at(q, q)) / static_cast<double>(n_q));
    }
    if (ms > 1.5) throw DomainError("minimum_sensitivity: empty confusion matrix");
    return ms;
}

double mean_absolute_error(const ConfusionMatrix& confusion) {
    const std::int64_t n = confusion.total();
    if (n < 1) throw DomainError("mean_absolute_error: empty confusion matrix");
    double sum = 0.0;
    for (int i = 0; i < confusion.q_classes; ++i)
        for (int j = 0; j < confusion.q_classes; ++j)
            sum += std::abs(i - j) * static_cast<double>(confusion.at(i, j));
    return sum / static_cast<double>(n);
}

double ccr(const ConfusionMatrix& confusion) {
    const std::int64_t n = confusion.total();
    if (n < 1) throw DomainError("ccr: empty confusion matrix");
    std::int64_t diag = 0;
    for (int q = 0; q < confusion.q_classes; ++q) diag += confusion.at(q, q);
    return static_cast<double>(diag) / static_cast<double>(n);
}

double top_k_ccr(const BatchProbabilities& batch, int k) {
    if (k < 1 || k > batch.q_classes) throw DomainError("top_k_ccr: k out of range");
    std::size_t hits = 0;
    std::vector<int> order(static_cast<std::size_t>(batch.q_classes));
    for (std::size_t s = 0; s < batch.n_samples; ++s) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (batch.at(s, a) != batch.at(s, b)) return batch.at(s, a) > batch.at(s, b);
            return a < b;
        });
        for (int r = 0; r < k; ++r)
            if (order[static_cast<std::size_t>(r)] == batch.labels[s]) {
                ++hits;
                break;
            }
    }
    return static_cast<double>(hits) / static_cast<double>(batch.n_samples);
}

double one_off_accuracy(const ConfusionMatrix& confusion) {
    const std::int64_t n = confusion.total();
    if (n < 1) throw DomainError("one_off_accuracy: empty confusion matrix");
    std::int64_t near = 0;
    for (int i = 0; i < confusion.q_classes; ++i)
        for (int j = 0; j < confusion.q_classes; ++j)
            if (std::abs(i - j) <= 1) near += confusion.at(i, j);
    return static_cast<double>(near) / static_cast<double>(n);
}

EvaluationReport evaluate_all(const BatchProbabilities& batch,
                              const std::vector<int>& predictions) {
    batch.validate();
    if (predictions.size() != batch.n_samples)
        throw DomainError("evaluate_all: predictions length mismatch");

    EvaluationReport report;
    report.confusion = confusion_from_predictions(batch.labels, predictions, batch.q_classes);
    try {
        report.qwk = qwk_metric(report.confusion);
    } catch (const UndefinedMetricError&) {
        report.qwk = std::nan("");
        report.qwk_defined = false;
    }
    report.ms = minimum_sensitivity(report.confusion);
    report.mae = mean_absolute_error(report.confusion);
    report.ccr = ccr(report.confusion);
    report.top2 = top_k_ccr(batch, std::min(2, batch.q_classes));
    report.top3 = top_k_ccr(batch, std::min(3, batch.q_classes));
    report.one_off = one_off_accuracy(report.confusion);
    return report;
}

}  // namespace ordinal
