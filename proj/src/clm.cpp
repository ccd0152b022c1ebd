#include "ordinal/clm.hpp"

#include <cmath>

#include "ordinal/errors.hpp"

namespace ordinal {

ClmParameters ClmParameters::initial(int q_classes) {
    if (q_classes < 2) throw DomainError("ClmParameters: q_classes must be >= 2");
    ClmParameters p;
    p.q_classes = q_classes;
    p.tau = 1.0;
    if (q_classes == 2) {
        p.b1 = 0.0;
    } else {
        // Q-1 thresholds evenly spaced on [-2, 2]: spacing 4/(Q-2), so each
        // increment alpha_i^2 = 4/(Q-2).
        p.b1 = -2.0;
        p.alpha.assign(static_cast<std::size_t>(q_classes - 2),
                       std::sqrt(4.0 / (q_classes - 2)));
    }
    return p;
}

void ClmParameters::validate() const {
    if (q_classes < 2) throw DomainError("ClmParameters: q_classes must be >= 2");
    if (!(tau > 0.0)) throw DomainError("ClmParameters: tau must be > 0");
    if (!std::isfinite(b1) || !std::isfinite(tau))
        throw DomainError("ClmParameters: non-finite parameter");
    if (alpha.size() != static_cast<std::size_t>(q_classes - 2))
        throw DomainError("ClmParameters: alpha must have length Q-2");
    for (double a : alpha)
        if (!std::isfinite(a)) throw DomainError("ClmParameters: non-finite alpha");
}

std::vector<double> build_thresholds(const ClmParameters& params) {
    params.validate();
    std::vector<double> thresholds(static_cast<std::size_t>(params.q_classes - 1));
    double b = params.b1;
    thresholds[0] = b;
    for (std::size_t i = 0; i < params.alpha.size(); ++i) {
        b += params.alpha[i] * params.alpha[i];
        thresholds[i + 1] = b;
    }
    return thresholds;
}

ClmForwardRecord clm_forward(const ClmParameters& params, LinkFunction link, double latent) {
    if (!std::isfinite(latent)) throw DomainError("clm_forward: non-finite latent");
    const auto thresholds = build_thresholds(params);
    const int q = params.q_classes;

    ClmForwardRecord rec;
    rec.projection = latent / params.tau;
    rec.cumulative.resize(thresholds.size());
    for (std::size_t i = 0; i < thresholds.size(); ++i)
        rec.cumulative[i] = link_cdf(link, thresholds[i] - rec.projection);

    rec.probs.resize(static_cast<std::size_t>(q));
    rec.probs[0] = rec.cumulative[0];
    for (int c = 1; c < q - 1; ++c)
        rec.probs[c] = rec.cumulative[c] - rec.cumulative[c - 1];
    rec.probs[q - 1] = 1.0 - rec.cumulative[q - 2];

    // floor at kProbEps, then renormalize
    double sum = 0.0;
    for (double& p : rec.probs) {
        if (p < kProbEps) p = kProbEps;
        sum += p;
    }
    for (double& p : rec.probs) p /= sum;
    return rec;
}

ClmGradients clm_gradients(const ClmParameters& params, LinkFunction link, double latent,
                           std::span<const double> upstream) {
    if (!std::isfinite(latent)) throw DomainError("clm_gradients: non-finite latent");
    const int q = params.q_classes;
    if (upstream.size() != static_cast<std::size_t>(q))
        throw DomainError("clm_gradients: upstream must have length Q");
    const auto thresholds = build_thresholds(params);
    const double f = latent / params.tau;

    // c_j = F(t_j - f): appears with +1 in probs[j] and -1 in probs[j+1].
    // dL/dt_j = (u_j - u_{j+1}) * pdf(t_j - f); dL/df is the negated sum.
    ClmGradients g;
    g.d_alpha.assign(params.alpha.size(), 0.0);
    double d_f = 0.0;
    std::vector<double> d_threshold(thresholds.size());
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
        const double v = (upstream[j] - upstream[j + 1]) * link_pdf(link, thresholds[j] - f);
        d_threshold[j] = v;
        d_f -= v;
        g.d_b1 += v;
    }
    // t_j = b1 + sum_{i < j} alpha_i^2, so dt_j/dalpha_i = 2 alpha_i for i < j
    double suffix = 0.0;
    for (std::size_t i = params.alpha.size(); i-- > 0;) {
        suffix += d_threshold[i + 1];
        g.d_alpha[i] = 2.0 * params.alpha[i] * suffix;
    }
    g.d_latent = d_f / params.tau;
    g.d_tau = d_f * (-latent / (params.tau * params.tau));
    return g;
}

int predict_interval(const ClmParameters& params, double latent) {
    const auto thresholds = build_thresholds(params);
    const double f = latent / params.tau;
    for (std::size_t j = 0; j < thresholds.size(); ++j)
        if (f <= thresholds[j]) return static_cast<int>(j);
    return params.q_classes - 1;
}

int predict_argmax(std::span<const double> probs) {
    if (probs.empty()) throw DomainError("predict_argmax: empty probability vector");
    int best = 0;
    for (std::size_t i = 1; i < probs.size(); ++i)
        if (probs[i] > probs[best]) best = static_cast<int>(i);
    return best;
}

int predict_argmax(const ClmForwardRecord& record) {
    return predict_argmax(std::span<const double>(record.probs));
}

}  // namespace ordinal
