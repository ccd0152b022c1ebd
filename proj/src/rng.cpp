#include "ordinal/rng.hpp"

#include <cmath>
#include <limits>

namespace ordinal {

std::uint64_t Rng::below(std::uint64_t bound) {
    // reject the tail that would bias the modulo
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % bound;
}

double Rng::normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::logistic() {
    const double u = uniform_open();
    return std::log(u / (1.0 - u));
}

double Rng::gumbel_min() {
    const double u = uniform_open();
    return std::log(-std::log(u));
}

}  // namespace ordinal
