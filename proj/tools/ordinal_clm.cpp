#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ordinal/data.hpp"
#include "ordinal/errors.hpp"
#include "ordinal/grid.hpp"
#include "ordinal/model_io.hpp"
#include "ordinal/trainer.hpp"

namespace fs = std::filesystem;
using namespace ordinal;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitDivergence = 4;

// Phi^{-1} by bisection on the probit cdf; only used for default threshold
// placement in `generate`, so speed is irrelevant.
double normal_quantile(double p) {
    double lo = -10.0, hi = 10.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (link_cdf(LinkFunction::Probit, mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Default generator spec: alternating-sign weight pattern with latent scale 10
// and thresholds at the equal-mass quantiles of the latent + noise mixture.
SyntheticSpec default_spec(int samples, int features, int classes, const std::string& link,
                           std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_samples = samples;
    spec.n_features = features;
    spec.q_classes = classes;
    spec.link = link_from_string(link);
    spec.seed = seed;

    spec.true_weights.resize(static_cast<std::size_t>(features));
    double norm_sq = 0.0;
    for (int j = 0; j < features; ++j) {
        const double base = (j % 2 == 0 ? 1.0 : -1.0) * (j % 4 < 2 ? 1.0 : 0.75);
        spec.true_weights[static_cast<std::size_t>(j)] = base;
        norm_sq += base * base;
    }
    const double scale = 10.0 / std::sqrt(norm_sq);
    for (double& w : spec.true_weights) w *= scale;

    double noise_var = 1.0;
    switch (spec.link) {
        case LinkFunction::Logit: noise_var = M_PI * M_PI / 3.0; break;
        case LinkFunction::Probit: noise_var = 1.0; break;
        case LinkFunction::CLogLog: noise_var = M_PI * M_PI / 6.0; break;
    }
    const double total_sd = std::sqrt(100.0 + noise_var);
    spec.true_thresholds.resize(static_cast<std::size_t>(classes - 1));
    for (int q = 1; q < classes; ++q)
        spec.true_thresholds[static_cast<std::size_t>(q - 1)] =
            total_sd * normal_quantile(static_cast<double>(q) / classes);
    return spec;
}

void print_report(const EvaluationReport& report, std::ostream& out) {
    out << report_to_csv(report);
}

int grid_threads() {
    if (const char* env = std::getenv("ORDINAL_CLM_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cumulative-link-model ordinal classifier"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic ordinal dataset");
    int g_samples = 1000, g_features = 4, g_classes = 5;
    std::string g_link = "logit", g_out;
    std::uint64_t g_seed = 0;
    gen->add_option("--samples", g_samples, "Number of samples")->check(CLI::PositiveNumber);
    gen->add_option("--features", g_features, "Feature dimension")->check(CLI::PositiveNumber);
    gen->add_option("--classes", g_classes, "Number of ordinal classes")
        ->check(CLI::Range(2, 1000));
    gen->add_option("--link", g_link, "Noise family: logit|probit|cloglog");
    gen->add_option("--seed", g_seed, "Random seed");
    gen->add_option("--out", g_out, "Output directory")->required();

    // train
    auto* tr = app.add_subcommand("train", "Train a model on a CSV dataset");
    std::string t_link = "logit", t_data, t_out;
    double t_lr = 1e-3, t_val_fraction = 0.1;
    int t_batch = 32, t_epochs = 100;
    std::uint64_t t_seed = 0;
    bool t_balance = false;
    std::vector<int> t_hidden = {32, 32};
    tr->add_option("--link", t_link, "logit|probit|cloglog|nominal");
    tr->add_option("--lr", t_lr, "Initial learning rate")->check(CLI::PositiveNumber);
    tr->add_option("--batch-size", t_batch, "Mini-batch size")->check(CLI::PositiveNumber);
    tr->add_option("--epochs", t_epochs, "Maximum epochs")->check(CLI::PositiveNumber);
    tr->add_option("--seed", t_seed, "Random seed");
    tr->add_flag("--balance", t_balance, "Oversample the training split to class balance");
    tr->add_option("--data", t_data, "Training CSV")->required();
    tr->add_option("--val-fraction", t_val_fraction, "Held-out validation fraction");
    tr->add_option("--hidden", t_hidden, "Hidden layer widths");
    tr->add_option("--out", t_out, "Output directory")->required();

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "Evaluate a saved model");
    std::string e_model, e_data, e_decision = "interval", e_out;
    ev->add_option("--model", e_model, "Model JSON")->required();
    ev->add_option("--data", e_data, "Evaluation CSV")->required();
    ev->add_option("--decision", e_decision, "interval|argmax");
    ev->add_option("--out", e_out, "Report file (default: stdout)");

    // predict
    auto* pr = app.add_subcommand("predict", "Per-sample probabilities and predictions");
    std::string p_model, p_data, p_out;
    pr->add_option("--model", p_model, "Model JSON")->required();
    pr->add_option("--data", p_data, "Input CSV")->required();
    pr->add_option("--out", p_out, "Predictions CSV")->required();

    // grid
    auto* gr = app.add_subcommand("grid", "Factor grid: link x LR x batch size");
    std::string r_data, r_out;
    std::vector<std::string> r_links = {"logit", "probit", "cloglog"};
    std::vector<double> r_lrs = {1e-4, 1e-3, 1e-2};
    std::vector<int> r_batches = {32};
    int r_runs = 5, r_epochs = 100;
    std::uint64_t r_seed = 0;
    bool r_balance = false;
    std::vector<int> r_hidden = {32, 32};
    gr->add_option("--data", r_data, "Dataset CSV")->required();
    gr->add_option("--links", r_links, "Links (logit|probit|cloglog|nominal)");
    gr->add_option("--lrs", r_lrs, "Initial learning rates");
    gr->add_option("--batch-sizes", r_batches, "Batch sizes");
    gr->add_option("--runs", r_runs, "Runs per cell")->check(CLI::PositiveNumber);
    gr->add_option("--epochs", r_epochs, "Maximum epochs")->check(CLI::PositiveNumber);
    gr->add_option("--seed", r_seed, "Base seed");
    gr->add_flag("--balance", r_balance, "Oversample the training split");
    gr->add_option("--hidden", r_hidden, "Hidden layer widths");
    gr->add_option("--out", r_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*gen) {
            const auto spec = default_spec(g_samples, g_features, g_classes, g_link, g_seed);
            SyntheticGroundTruth truth;
            const Dataset data = generate_synthetic(spec, &truth);
            fs::create_directories(g_out);
            save_csv(data, fs::path(g_out) / "data.csv");
            save_ground_truth(truth, fs::path(g_out) / "ground_truth.json");
            std::cout << "wrote " << data.size() << " samples to " << g_out << "\n";
        } else if (*tr) {
            TrainingConfig config;
            if (t_link != "nominal") config.link = link_from_string(t_link);
            config.eta0 = t_lr;
            config.batch_size = t_batch;
            config.max_epochs = t_epochs;
            config.seed = t_seed;
            config.balance = t_balance;
            config.hidden = t_hidden;

            const Dataset data = load_csv(t_data);
            const TrainValSplit parts = split_train_val(data, t_val_fraction, t_seed);
            const TrainResult result = train(config, parts.train, parts.val);

            fs::create_directories(t_out);
            save_model(result.model, fs::path(t_out) / "model.json");
            save_history(result.history, fs::path(t_out) / "history.jsonl");

            const auto rule = result.model.is_nominal() ? DecisionRule::Argmax
                                                        : DecisionRule::Interval;
            print_report(evaluate(result.model, parts.val, rule), std::cout);
            if (result.history.diverged) {
                std::cerr << "training diverged; best model so far was saved\n";
                return kExitDivergence;
            }
        } else if (*ev) {
            const ModelBundle model = load_model(e_model);
            const Dataset data = load_csv(e_data);
            const auto report = evaluate(model, data, decision_rule_from_string(e_decision));
            if (e_out.empty()) {
                print_report(report, std::cout);
            } else {
                save_report(report, e_out);
            }
        } else if (*pr) {
            const ModelBundle model = load_model(p_model);
            const Dataset data = load_csv(p_data);
            const Predictions preds = predict(model, data);

            std::ofstream out(p_out, std::ios::binary);
            if (!out) throw DomainError("predict: cannot open " + p_out);
            for (int q = 0; q < model.q_classes; ++q) out << "prob_" << q << ",";
            if (!model.is_nominal()) out << "interval,";
            out << "argmax\n";
            char buf[40];
            for (std::size_t k = 0; k < preds.batch.n_samples; ++k) {
                for (int q = 0; q < model.q_classes; ++q) {
                    std::snprintf(buf, sizeof buf, "%.17g", preds.batch.at(k, q));
                    out << buf << ",";
                }
                if (!model.is_nominal()) out << preds.interval[k] << ",";
                out << preds.argmax[k] << "\n";
            }
        } else if (*gr) {
            GridSpec spec;
            spec.links = r_links;
            spec.etas = r_lrs;
            spec.batch_sizes = r_batches;
            spec.runs_per_cell = r_runs;
            spec.base_seed = r_seed;

            TrainingConfig base;
            base.max_epochs = r_epochs;
            base.balance = r_balance;
            base.hidden = r_hidden;

            const Dataset data = load_csv(r_data);
            const Splits splits = split(data, SplitFractions{}, r_seed ^ 0x5851f42d4c957f2dull);
            const GridResult result = run_grid(spec, base, splits, grid_threads());
            save_grid(result, r_out);
            std::cout << grid_table(result);
        }
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDivergence;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}
