#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ordinal {

/// Deterministic random source. All transforms are spelled out here instead of
/// using std::*_distribution, whose algorithms are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1); never returns an exact endpoint.
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound) via rejection.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal (Box-Muller, no caching).
    double normal();

    /// Standard logistic.
    double logistic();

    /// Gumbel-minimum: P(e <= t) = 1 - exp(-exp(t)).
    double gumbel_min();

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace ordinal
