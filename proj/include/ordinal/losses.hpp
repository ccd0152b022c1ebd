#pragma once

#include <span>
#include <vector>

#include "ordinal/metrics.hpp"

namespace ordinal {

/// Quadratic penalization weights w_ij = (i-j)^2 / (Q-1)^2.
struct PenalizationMatrix {
    int q_classes = 0;
    std::vector<double> weights;  // row-major Q x Q

    double at(int i, int j) const { return weights[i * q_classes + j]; }
};

PenalizationMatrix qwk_weights(int q_classes);

/// QWK = 1 - sum(w O) / sum(w E) with E_ij = O_i. O_.j / N.
/// Throws UndefinedMetricError when sum(w E) = 0.
double qwk_metric(const ConfusionMatrix& confusion);

/// Continuous QWK loss on predicted probabilities, in [0, 2]; lower is better.
double qwk_c_loss(const BatchProbabilities& batch, const PenalizationMatrix& weights);

/// dLoss/dprobs for every entry of the batch (N x Q, row-major).
std::vector<double> qwk_c_gradient(const BatchProbabilities& batch,
                                   const PenalizationMatrix& weights);

struct SoftmaxCrossEntropyResult {
    double loss = 0.0;
    std::vector<double> grad;  // softmax(logits) - one_hot(label)
};

/// Numerically stable log-sum-exp cross entropy (nominal baseline).
SoftmaxCrossEntropyResult softmax_cross_entropy(std::span<const double> logits, int label);

}  // namespace ordinal
