#pragma once

#include <span>
#include <vector>

#include "ordinal/link.hpp"

namespace ordinal {

/// Learnable ordinal head: first threshold b1, squared-increment vector alpha
/// (length Q-2) and projection scale tau > 0.
struct ClmParameters {
    double b1 = 0.0;
    std::vector<double> alpha;
    double tau = 1.0;
    int q_classes = 2;

    /// Thresholds evenly spaced on [-2, 2], tau = 1.
    static ClmParameters initial(int q_classes);

    void validate() const;
};

/// Thresholds (b1, b1 + a1^2, b1 + a1^2 + a2^2, ...), length Q-1, nondecreasing.
std::vector<double> build_thresholds(const ClmParameters& params);

struct ClmForwardRecord {
    double projection = 0.0;              // f(x) = latent / tau
    std::vector<double> cumulative;       // P(y <= C_q | x), length Q-1
    std::vector<double> probs;            // class probabilities, length Q
};

ClmForwardRecord clm_forward(const ClmParameters& params, LinkFunction link, double latent);

struct ClmGradients {
    double d_latent = 0.0;
    double d_b1 = 0.0;
    double d_tau = 0.0;
    std::vector<double> d_alpha;
};

/// Exact partial derivatives of probs contracted with upstream = dLoss/dprobs.
ClmGradients clm_gradients(const ClmParameters& params, LinkFunction link, double latent,
                           std::span<const double> upstream);

/// Interval decision rule: class q with b_{q-1} <= f(x) < b_q (boundary ties go
/// to the lower class).
int predict_interval(const ClmParameters& params, double latent);

/// Index of the maximum class probability, ties to the lowest index.
int predict_argmax(const ClmForwardRecord& record);
int predict_argmax(std::span<const double> probs);

}  // namespace ordinal
