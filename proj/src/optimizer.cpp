#include "ordinal/optimizer.hpp"

#include <cmath>

#include "ordinal/errors.hpp"

namespace ordinal {

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               double lr) {
    if (params.size() != grads.size() || params.size() != state.first_moment.size())
        throw DomainError("adam_step: dimension mismatch");
    if (!(lr > 0.0)) throw DomainError("adam_step: lr must be > 0");

    for (std::size_t i = 0; i < grads.size(); ++i)
        if (!std::isfinite(grads[i]))
            throw DivergenceError("adam_step: non-finite gradient", static_cast<long>(i));

    ++state.step_count;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
        v = state.beta2 * v + (1.0 - state.beta2) * grads[i] * grads[i];
        const double m_hat = m / bc1;
        const double v_hat = v / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

double lr_at(const LrSchedule& schedule, int epoch) {
    if (epoch < 0) throw DomainError("lr_at: negative epoch");
    return schedule.eta0 * std::exp(-schedule.decay_rate * static_cast<double>(epoch));
}

}  // namespace ordinal
