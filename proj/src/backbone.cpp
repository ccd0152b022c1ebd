#include "ordinal/backbone.hpp"

#include <cmath>

#include "ordinal/errors.hpp"

namespace ordinal {

void BackboneSpec::validate() const {
    if (input_dim < 1) throw DomainError("BackboneSpec: input_dim must be >= 1");
    if (output_dim < 1) throw DomainError("BackboneSpec: output_dim must be >= 1");
    if (hidden.size() > 8) throw DomainError("BackboneSpec: at most 8 hidden layers");
    for (int h : hidden)
        if (h < 1) throw DomainError("BackboneSpec: hidden widths must be >= 1");
}

double elu(double z) { return z > 0.0 ? z : std::expm1(z); }
double elu_prime(double z) { return z > 0.0 ? 1.0 : std::exp(z); }

namespace {

std::vector<int> layer_dims(const BackboneSpec& spec) {
    std::vector<int> dims;
    dims.push_back(spec.input_dim);
    dims.insert(dims.end(), spec.hidden.begin(), spec.hidden.end());
    dims.push_back(spec.output_dim);
    return dims;
}

}  // namespace

BackboneParams BackboneParams::initialize(const BackboneSpec& spec, Rng& rng) {
    spec.validate();
    BackboneParams p;
    p.spec = spec;
    const auto dims = layer_dims(spec);
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const int fan_in = dims[l];
        const int fan_out = dims[l + 1];
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        std::vector<double> w(static_cast<std::size_t>(fan_out) * fan_in);
        for (double& v : w) v = rng.uniform(-bound, bound);
        p.weights.push_back(std::move(w));
        p.biases.emplace_back(static_cast<std::size_t>(fan_out), 0.0);
    }
    return p;
}

std::size_t BackboneParams::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
    return n;
}

void BackboneParams::validate() const {
    spec.validate();
    const auto dims = layer_dims(spec);
    if (weights.size() != dims.size() - 1 || biases.size() != dims.size() - 1)
        throw DomainError("BackboneParams: layer count mismatch");
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        if (weights[l].size() != static_cast<std::size_t>(dims[l + 1]) * dims[l])
            throw DomainError("BackboneParams: weight shape mismatch");
        if (biases[l].size() != static_cast<std::size_t>(dims[l + 1]))
            throw DomainError("BackboneParams: bias shape mismatch");
        for (double v : weights[l])
            if (!std::isfinite(v)) throw DomainError("BackboneParams: non-finite weight");
        for (double v : biases[l])
            if (!std::isfinite(v)) throw DomainError("BackboneParams: non-finite bias");
    }
}

std::vector<double> backbone_forward(const BackboneParams& params, std::span<const double> x,
                                     ForwardCache* cache) {
    if (x.size() != static_cast<std::size_t>(params.spec.input_dim))
        throw DomainError("backbone_forward: input dimension mismatch");
    const std::size_t n_layers = params.weights.size();
    if (cache) {
        cache->layer_inputs.assign(n_layers, {});
        cache->preactivations.assign(n_layers, {});
    }

    std::vector<double> activation(x.begin(), x.end());
    for (std::size_t l = 0; l < n_layers; ++l) {
        const std::size_t in_dim = activation.size();
        const std::size_t out_dim = params.biases[l].size();
        if (cache) cache->layer_inputs[l] = activation;

        std::vector<double> pre(out_dim);
        for (std::size_t o = 0; o < out_dim; ++o) {
            double z = params.biases[l][o];
            const double* row = params.weights[l].data() + o * in_dim;
            for (std::size_t i = 0; i < in_dim; ++i) z += row[i] * activation[i];
            pre[o] = z;
        }
        if (cache) cache->preactivations[l] = pre;

        const bool last = (l + 1 == n_layers);
        activation.resize(out_dim);
        for (std::size_t o = 0; o < out_dim; ++o)
            activation[o] = last ? pre[o] : elu(pre[o]);
    }
    return activation;
}

BackboneGradients backbone_backward(const BackboneParams& params, const ForwardCache& cache,
                                    std::span<const double> upstream) {
    const std::size_t n_layers = params.weights.size();
    if (cache.layer_inputs.size() != n_layers || cache.preactivations.size() != n_layers)
        throw DomainError("backbone_backward: cache does not match parameters");
    if (upstream.size() != params.biases.back().size())
        throw DomainError("backbone_backward: upstream dimension mismatch");

    BackboneGradients g;
    g.d_weights.resize(n_layers);
    g.d_biases.resize(n_layers);

    std::vector<double> delta(upstream.begin(), upstream.end());
    for (std::size_t l = n_layers; l-- > 0;) {
        const auto& input = cache.layer_inputs[l];
        const std::size_t in_dim = input.size();
        const std::size_t out_dim = params.biases[l].size();
        if (delta.size() != out_dim)
            throw DomainError("backbone_backward: stale cache");

        // final layer is linear; hidden layers pass delta through ELU'
        if (l + 1 != n_layers) {
            for (std::size_t o = 0; o < out_dim; ++o)
                delta[o] *= elu_prime(cache.preactivations[l][o]);
        }

        g.d_weights[l].resize(out_dim * in_dim);
        g.d_biases[l] = delta;
        for (std::size_t o = 0; o < out_dim; ++o)
            for (std::size_t i = 0; i < in_dim; ++i)
                g.d_weights[l][o * in_dim + i] = delta[o] * input[i];

        std::vector<double> prev(in_dim, 0.0);
        for (std::size_t o = 0; o < out_dim; ++o) {
            const double* row = params.weights[l].data() + o * in_dim;
            for (std::size_t i = 0; i < in_dim; ++i) prev[i] += row[i] * delta[o];
        }
        delta = std::move(prev);
    }
    g.d_input = std::move(delta);
    return g;
}

}  // namespace ordinal
