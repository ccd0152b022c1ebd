#pragma once

#include <span>
#include <vector>

#include "ordinal/rng.hpp"

namespace ordinal {

struct BackboneSpec {
    int input_dim = 1;
    std::vector<int> hidden;  // at most 8 hidden layers
    int output_dim = 1;       // 1 for the CLM head, Q for the nominal baseline

    void validate() const;
    int layer_count() const { return static_cast<int>(hidden.size()) + 1; }
};

/// ELU with alpha = 1: z for z > 0, e^z - 1 otherwise.
double elu(double z);
double elu_prime(double z);

/// Fully-connected parameters; weights[l] is row-major (out x in).
struct BackboneParams {
    BackboneSpec spec;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;

    /// Glorot-uniform weights, zero biases.
    static BackboneParams initialize(const BackboneSpec& spec, Rng& rng);
    std::size_t parameter_count() const;
    void validate() const;
};

struct ForwardCache {
    std::vector<std::vector<double>> layer_inputs;  // x, then each hidden activation
    std::vector<std::vector<double>> preactivations;
};

/// Affine -> ELU per hidden layer, final affine with no activation.
std::vector<double> backbone_forward(const BackboneParams& params, std::span<const double> x,
                                     ForwardCache* cache = nullptr);

struct BackboneGradients {
    std::vector<std::vector<double>> d_weights;
    std::vector<std::vector<double>> d_biases;
    std::vector<double> d_input;
};

BackboneGradients backbone_backward(const BackboneParams& params, const ForwardCache& cache,
                                    std::span<const double> upstream);

}  // namespace ordinal
