#pragma once

#include <optional>
#include <string>

#include "ordinal/backbone.hpp"
#include "ordinal/clm.hpp"
#include "ordinal/data.hpp"
#include "ordinal/metrics.hpp"
#include "ordinal/optimizer.hpp"

namespace ordinal {

struct TrainingConfig {
    std::optional<LinkFunction> link;  // nullopt = nominal softmax baseline
    double eta0 = 1e-3;
    int batch_size = 32;
    int max_epochs = 100;
    std::uint64_t seed = 0;
    bool balance = false;
    std::vector<int> hidden = {32, 32};

    void validate() const;
    std::string link_name() const { return link ? to_string(*link) : "nominal"; }
};

struct EpochRecord {
    int epoch = 0;
    double lr = 0.0;
    double train_loss = 0.0;
    double val_qwk = 0.0;
    bool val_qwk_defined = true;
    double val_mae = 0.0;
    double wall_time = 0.0;  // seconds; not serialized (non-deterministic)
};

struct TrainingHistory {
    std::vector<EpochRecord> epochs;
    int best_epoch = 0;
    bool diverged = false;
    std::int64_t total_steps = 0;  // optimizer steps across all epochs
};

/// Serializable unit: backbone + head + config snapshot.
struct ModelBundle {
    int format_version = 1;
    int q_classes = 2;
    std::optional<LinkFunction> link;  // nullopt = nominal
    BackboneParams backbone;
    std::optional<ClmParameters> clm;
    TrainingConfig config;
    std::uint64_t seed = 0;
    std::string created_by = "ordinal-clm";

    bool is_nominal() const { return !link.has_value(); }
    void validate() const;
};

struct TrainResult {
    ModelBundle model;
    TrainingHistory history;
};

/// Flat parameter layout: per layer weights then biases, then (ordinal models)
/// b1, alpha, tau.
std::vector<double> flatten_parameters(const ModelBundle& model);
void set_parameters(ModelBundle& model, std::span<const double> flat);

/// Loss and flat gradient for one mini-batch: QWK_c for ordinal models, mean
/// cross entropy for nominal ones. `grad` is resized to the flat layout.
double batch_gradient(const ModelBundle& model, const Dataset& data,
                      std::span<const std::size_t> batch, std::vector<double>& grad);

/// Mini-batch training with Adam + exponential LR decay; checkpoints the model
/// with the best validation QWK (interval rule). On divergence the best model
/// so far is still returned with history.diverged set.
TrainResult train(const TrainingConfig& config, const Dataset& train_set,
                  const Dataset& val_set);

enum class DecisionRule { Interval, Argmax };

DecisionRule decision_rule_from_string(std::string_view name);
std::string to_string(DecisionRule rule);

struct Predictions {
    BatchProbabilities batch;           // probabilities + true labels
    std::vector<double> latents;        // l(x) per sample (CLM mode only)
    std::vector<int> interval;          // empty for nominal models
    std::vector<int> argmax;
};

Predictions predict(const ModelBundle& model, const Dataset& dataset);

EvaluationReport evaluate(const ModelBundle& model, const Dataset& dataset, DecisionRule rule);

}  // namespace ordinal
