#include "ordinal/losses.hpp"

#include <algorithm>
#include <cmath>

#include "ordinal/errors.hpp"

namespace ordinal {

PenalizationMatrix qwk_weights(int q_classes) {
    if (q_classes < 2) throw DomainError("qwk_weights: q_classes must be >= 2");
    PenalizationMatrix m;
    m.q_classes = q_classes;
    m.weights.resize(static_cast<std::size_t>(q_classes) * q_classes);
    const double denom = static_cast<double>(q_classes - 1) * (q_classes - 1);
    for (int i = 0; i < q_classes; ++i)
        for (int j = 0; j < q_classes; ++j)
            m.weights[i * q_classes + j] = static_cast<double>((i - j) * (i - j)) / denom;
    return m;
}

double qwk_metric(const ConfusionMatrix& confusion) {
    const std::int64_t n = confusion.total();
    if (n < 1) throw DomainError("qwk_metric: empty confusion matrix");
    const PenalizationMatrix w = qwk_weights(confusion.q_classes);

    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < confusion.q_classes; ++i) {
        const double row = static_cast<double>(confusion.row_sum(i));
        for (int j = 0; j < confusion.q_classes; ++j) {
            num += w.at(i, j) * static_cast<double>(confusion.at(i, j));
            den += w.at(i, j) * row * static_cast<double>(confusion.col_sum(j)) /
                   static_cast<double>(n);
        }
    }
    if (den == 0.0)
        throw UndefinedMetricError("qwk_metric: degenerate denominator (single-class raters)");
    return 1.0 - num / den;
}

namespace {

// Shared QWK_c terms: numerator, denominator, and the per-class denominator
// weights d_j = sum_i (N_i/N) w_ij (the denominator is sum_j d_j sum_k P_kj).
struct QwkcTerms {
    double num = 0.0;
    double den = 0.0;
    std::vector<double> class_weight;  // d_j
};

QwkcTerms qwk_c_terms(const BatchProbabilities& batch, const PenalizationMatrix& w) {
    // shape-only: finite-difference probes sit slightly off the simplex
    batch.validate_shape();
    if (w.q_classes != batch.q_classes)
        throw DomainError("qwk_c: penalization matrix class count mismatch");
    const int q = batch.q_classes;
    const double n = static_cast<double>(batch.n_samples);

    std::vector<double> class_count(static_cast<std::size_t>(q), 0.0);
    for (int t : batch.labels) class_count[static_cast<std::size_t>(t)] += 1.0;

    QwkcTerms terms;
    terms.class_weight.assign(static_cast<std::size_t>(q), 0.0);
    for (int j = 0; j < q; ++j)
        for (int i = 0; i < q; ++i)
            terms.class_weight[j] += class_count[static_cast<std::size_t>(i)] / n * w.at(i, j);

    for (std::size_t k = 0; k < batch.n_samples; ++k)
        for (int j = 0; j < q; ++j) {
            terms.num += w.at(batch.labels[k], j) * batch.at(k, j);
            terms.den += terms.class_weight[static_cast<std::size_t>(j)] * batch.at(k, j);
        }
    if (terms.den == 0.0)
        throw UndefinedMetricError("qwk_c: zero denominator");
    return terms;
}

}  // namespace

double qwk_c_loss(const BatchProbabilities& batch, const PenalizationMatrix& weights) {
    const QwkcTerms t = qwk_c_terms(batch, weights);
    return t.num / t.den;
}

std::vector<double> qwk_c_gradient(const BatchProbabilities& batch,
                                   const PenalizationMatrix& weights) {
    const QwkcTerms t = qwk_c_terms(batch, weights);
    const int q = batch.q_classes;
    std::vector<double> grad(batch.n_samples * static_cast<std::size_t>(q));
    const double ratio = t.num / (t.den * t.den);
    for (std::size_t k = 0; k < batch.n_samples; ++k)
        for (int j = 0; j < q; ++j)
            grad[k * static_cast<std::size_t>(q) + j] =
                weights.at(batch.labels[k], j) / t.den -
                ratio * t.class_weight[static_cast<std::size_t>(j)];
    return grad;
}

SoftmaxCrossEntropyResult softmax_cross_entropy(std::span<const double> logits, int label) {
    const int q = static_cast<int>(logits.size());
    if (q < 2) throw DomainError("softmax_cross_entropy: need at least 2 logits");
    if (label < 0 || label >= q) throw DomainError("softmax_cross_entropy: label out of range");
    for (double z : logits)
        if (!std::isfinite(z)) throw DomainError("softmax_cross_entropy: non-finite logit");

    const double zmax = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - zmax);
    const double log_sum = std::log(sum) + zmax;

    SoftmaxCrossEntropyResult out;
    out.loss = log_sum - logits[static_cast<std::size_t>(label)];
    out.grad.resize(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j)
        out.grad[static_cast<std::size_t>(j)] = std::exp(logits[static_cast<std::size_t>(j)] - log_sum);
    out.grad[static_cast<std::size_t>(label)] -= 1.0;
    return out;
}

}  // namespace ordinal
