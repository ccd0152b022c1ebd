#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ordinal {

/// Adam state over one flattened parameter vector. beta1/beta2/epsilon default
/// to the values of the original algorithm.
struct AdamState {
    std::int64_t step_count = 0;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t dim)
        : first_moment(dim, 0.0), second_moment(dim, 0.0) {}
};

/// In-place bias-corrected Adam update. Throws DivergenceError (with the
/// offending parameter index) on a non-finite gradient.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               double lr);

/// Exponential decay eta = eta0 * exp(-decay_rate * epoch).
struct LrSchedule {
    double eta0 = 1e-3;
    double decay_rate = 0.025;
};

double lr_at(const LrSchedule& schedule, int epoch);

}  // namespace ordinal
