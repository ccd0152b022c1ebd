#include "ordinal/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ordinal/errors.hpp"
#include "ordinal/losses.hpp"

namespace ordinal {

void TrainingConfig::validate() const {
    if (!(eta0 > 0.0)) throw DomainError("TrainingConfig: eta0 must be > 0");
    if (batch_size < 1) throw DomainError("TrainingConfig: batch_size must be >= 1");
    if (link && batch_size == 1)
        throw DomainError("TrainingConfig: batch_size 1 is incompatible with the QWK_c loss");
    if (max_epochs < 1) throw DomainError("TrainingConfig: max_epochs must be >= 1");
    BackboneSpec probe{1, hidden, 1};
    probe.validate();
}

void ModelBundle::validate() const {
    if (q_classes < 2) throw DomainError("ModelBundle: q_classes must be >= 2");
    backbone.validate();
    if (link) {
        if (!clm) throw DomainError("ModelBundle: ordinal model missing CLM parameters");
        clm->validate();
        if (clm->q_classes != q_classes) throw DomainError("ModelBundle: CLM class mismatch");
        if (backbone.spec.output_dim != 1)
            throw DomainError("ModelBundle: ordinal backbone must have a single output");
    } else {
        if (clm) throw DomainError("ModelBundle: nominal model carries CLM parameters");
        if (backbone.spec.output_dim != q_classes)
            throw DomainError("ModelBundle: nominal backbone must emit Q logits");
    }
}

DecisionRule decision_rule_from_string(std::string_view name) {
    if (name == "interval") return DecisionRule::Interval;
    if (name == "argmax") return DecisionRule::Argmax;
    throw DomainError("unknown decision rule: " + std::string(name));
}

std::string to_string(DecisionRule rule) {
    return rule == DecisionRule::Interval ? "interval" : "argmax";
}

namespace {

constexpr double kTauFloor = 1e-3;

// Flat parameter layout: per layer weights then biases, then (CLM) b1, alpha, tau.
std::size_t flat_dim(const ModelBundle& model) {
    std::size_t n = model.backbone.parameter_count();
    if (model.clm) n += 2 + model.clm->alpha.size();
    return n;
}

}  // namespace

std::vector<double> flatten_parameters(const ModelBundle& model) {
    std::vector<double> out;
    out.reserve(flat_dim(model));
    for (std::size_t l = 0; l < model.backbone.weights.size(); ++l) {
        out.insert(out.end(), model.backbone.weights[l].begin(), model.backbone.weights[l].end());
        out.insert(out.end(), model.backbone.biases[l].begin(), model.backbone.biases[l].end());
    }
    if (model.clm) {
        out.push_back(model.clm->b1);
        out.insert(out.end(), model.clm->alpha.begin(), model.clm->alpha.end());
        out.push_back(model.clm->tau);
    }
    return out;
}

void set_parameters(ModelBundle& model, std::span<const double> flat) {
    if (flat.size() != flat_dim(model))
        throw DomainError("set_parameters: flat vector length mismatch");
    std::size_t pos = 0;
    for (std::size_t l = 0; l < model.backbone.weights.size(); ++l) {
        auto& w = model.backbone.weights[l];
        std::copy_n(flat.begin() + pos, w.size(), w.begin());
        pos += w.size();
        auto& b = model.backbone.biases[l];
        std::copy_n(flat.begin() + pos, b.size(), b.begin());
        pos += b.size();
    }
    if (model.clm) {
        model.clm->b1 = flat[pos++];
        std::copy_n(flat.begin() + pos, model.clm->alpha.size(), model.clm->alpha.begin());
        pos += model.clm->alpha.size();
        model.clm->tau = flat[pos++];
    }
}

namespace {

void accumulate_backbone(const BackboneGradients& g, const ModelBundle& model,
                         std::vector<double>& flat) {
    std::size_t pos = 0;
    for (std::size_t l = 0; l < model.backbone.weights.size(); ++l) {
        for (std::size_t i = 0; i < g.d_weights[l].size(); ++i) flat[pos + i] += g.d_weights[l][i];
        pos += g.d_weights[l].size();
        for (std::size_t i = 0; i < g.d_biases[l].size(); ++i) flat[pos + i] += g.d_biases[l][i];
        pos += g.d_biases[l].size();
    }
}

void accumulate_clm(const ClmGradients& g, const ModelBundle& model, std::vector<double>& flat) {
    std::size_t pos = model.backbone.parameter_count();
    flat[pos++] += g.d_b1;
    for (std::size_t i = 0; i < g.d_alpha.size(); ++i) flat[pos + i] += g.d_alpha[i];
    pos += g.d_alpha.size();
    flat[pos] += g.d_tau;
}

std::vector<double> softmax(std::span<const double> logits) {
    const double zmax = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        p[j] = std::exp(logits[j] - zmax);
        sum += p[j];
    }
    for (double& v : p) v /= sum;
    return p;
}

ModelBundle make_initial_model(const TrainingConfig& config, const Dataset& train_set) {
    ModelBundle model;
    model.q_classes = train_set.q_classes;
    model.link = config.link;
    model.config = config;
    model.seed = config.seed;

    BackboneSpec spec;
    spec.input_dim = train_set.n_features;
    spec.hidden = config.hidden;
    spec.output_dim = config.link ? 1 : train_set.q_classes;

    Rng rng(config.seed);
    model.backbone = BackboneParams::initialize(spec, rng);
    if (config.link) model.clm = ClmParameters::initial(train_set.q_classes);
    return model;
}

}  // namespace

double batch_gradient(const ModelBundle& model, const Dataset& data,
                      std::span<const std::size_t> batch, std::vector<double>& grad) {
    if (batch.empty()) throw DomainError("batch_gradient: empty batch");
    const PenalizationMatrix weights = qwk_weights(model.q_classes);
    grad.assign(flat_dim(model), 0.0);
    const int q = model.q_classes;
    const std::size_t n = batch.size();

    std::vector<ForwardCache> caches(n);
    if (!model.is_nominal()) {
        BatchProbabilities probs;
        probs.n_samples = n;
        probs.q_classes = q;
        probs.probs.resize(n * static_cast<std::size_t>(q));
        probs.labels.resize(n);
        std::vector<double> latents(n);
        for (std::size_t k = 0; k < n; ++k) {
            const auto out = backbone_forward(model.backbone, data.row(batch[k]), &caches[k]);
            latents[k] = out[0];
            const auto rec = clm_forward(*model.clm, *model.link, latents[k]);
            std::copy(rec.probs.begin(), rec.probs.end(),
                      probs.probs.begin() + static_cast<std::ptrdiff_t>(k * q));
            probs.labels[k] = data.labels[batch[k]];
        }
        const double loss = qwk_c_loss(probs, weights);
        const auto upstream = qwk_c_gradient(probs, weights);
        for (std::size_t k = 0; k < n; ++k) {
            const std::span<const double> row(upstream.data() + k * q, static_cast<std::size_t>(q));
            const auto head = clm_gradients(*model.clm, *model.link, latents[k], row);
            accumulate_clm(head, model, grad);
            const double d_latent[1] = {head.d_latent};
            accumulate_backbone(backbone_backward(model.backbone, caches[k], d_latent), model,
                                grad);
        }
        return loss;
    }

    // nominal: mean cross entropy over the batch
    double loss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const auto logits = backbone_forward(model.backbone, data.row(batch[k]), &caches[k]);
        auto ce = softmax_cross_entropy(logits, data.labels[batch[k]]);
        loss += ce.loss;
        for (double& g : ce.grad) g /= static_cast<double>(n);
        accumulate_backbone(backbone_backward(model.backbone, caches[k], ce.grad), model, grad);
    }
    return loss / static_cast<double>(n);
}

Predictions predict(const ModelBundle& model, const Dataset& dataset) {
    model.validate();
    dataset.validate();
    if (dataset.n_features != model.backbone.spec.input_dim)
        throw DomainError("predict: feature dimension mismatch");
    if (dataset.q_classes > model.q_classes)
        throw DomainError("predict: dataset has more classes than the model");

    const std::size_t n = dataset.size();
    const int q = model.q_classes;
    Predictions out;
    out.batch.n_samples = n;
    out.batch.q_classes = q;
    out.batch.probs.resize(n * static_cast<std::size_t>(q));
    out.batch.labels = dataset.labels;
    out.argmax.resize(n);
    if (!model.is_nominal()) {
        out.latents.resize(n);
        out.interval.resize(n);
    }

    for (std::size_t k = 0; k < n; ++k) {
        const auto raw = backbone_forward(model.backbone, dataset.row(k));
        std::vector<double> probs;
        if (model.is_nominal()) {
            probs = softmax(raw);
        } else {
            out.latents[k] = raw[0];
            probs = clm_forward(*model.clm, *model.link, raw[0]).probs;
            out.interval[k] = predict_interval(*model.clm, raw[0]);
        }
        std::copy(probs.begin(), probs.end(),
                  out.batch.probs.begin() + static_cast<std::ptrdiff_t>(k * q));
        out.argmax[k] = predict_argmax(std::span<const double>(probs));
    }
    return out;
}

EvaluationReport evaluate(const ModelBundle& model, const Dataset& dataset, DecisionRule rule) {
    if (rule == DecisionRule::Interval && model.is_nominal())
        throw UnsupportedRuleError("evaluate: interval rule requires an ordinal model");
    const Predictions preds = predict(model, dataset);
    return evaluate_all(preds.batch,
                        rule == DecisionRule::Interval ? preds.interval : preds.argmax);
}

TrainResult train(const TrainingConfig& config, const Dataset& train_set,
                  const Dataset& val_set) {
    config.validate();
    train_set.validate();
    val_set.validate();
    if (train_set.q_classes != val_set.q_classes || train_set.n_features != val_set.n_features)
        throw DomainError("train: train/val shape mismatch");

    const Dataset working =
        config.balance ? balance_oversample(train_set, config.seed ^ 0x9e3779b97f4a7c15ull)
                       : train_set;

    TrainResult result;
    result.model = make_initial_model(config, working);
    ModelBundle& model = result.model;

    const LrSchedule schedule{config.eta0, 0.025};
    const DecisionRule val_rule = model.is_nominal() ? DecisionRule::Argmax
                                                     : DecisionRule::Interval;

    std::vector<double> flat = flatten_parameters(model);
    AdamState adam(flat.size());
    std::vector<double> grad(flat.size());

    Rng shuffle_rng(config.seed + 1);
    std::vector<std::size_t> order(working.size());
    std::iota(order.begin(), order.end(), 0);

    ModelBundle best = model;
    double best_qwk = -2.0;  // below any defined QWK

    for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        const double lr = lr_at(schedule, epoch);
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        std::size_t n_batches = 0;
        bool diverged = false;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t len = std::min<std::size_t>(config.batch_size, order.size() - start);
            const std::span<const std::size_t> batch(order.data() + start, len);
            double loss;
            try {
                loss = batch_gradient(model, working, batch, grad);
                if (!std::isfinite(loss))
                    throw DivergenceError("train: non-finite loss", -1);
                adam_step(adam, flat, grad, lr);
            } catch (const DivergenceError&) {
                diverged = true;
                break;
            } catch (const UndefinedMetricError&) {
                diverged = true;  // saturated batch: all probability mass on one class
                break;
            }
            set_parameters(model, flat);
            if (model.clm && model.clm->tau < kTauFloor) {
                model.clm->tau = kTauFloor;
                flat = flatten_parameters(model);
            }
            loss_sum += loss;
            ++n_batches;
            ++result.history.total_steps;
        }
        if (diverged) {
            result.history.diverged = true;
            break;
        }

        const EvaluationReport val = evaluate(model, val_set, val_rule);
        EpochRecord rec;
        rec.epoch = epoch;
        rec.lr = lr;
        rec.train_loss = n_batches ? loss_sum / static_cast<double>(n_batches) : 0.0;
        rec.val_qwk = val.qwk_defined ? val.qwk : 0.0;
        rec.val_qwk_defined = val.qwk_defined;
        rec.val_mae = val.mae;
        rec.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        result.history.epochs.push_back(rec);

        const double score = val.qwk_defined ? val.qwk : -2.0;
        if (score > best_qwk || result.history.epochs.size() == 1) {
            best_qwk = score;
            best = model;
            result.history.best_epoch = epoch;
        }
    }

    result.model = best;
    return result;
}

}  // namespace ordinal
