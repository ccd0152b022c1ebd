#include "ordinal/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ordinal/errors.hpp"
#include "ordinal/rng.hpp"

namespace ordinal {

void Dataset::validate() const {
    if (q_classes < 2) throw DomainError("Dataset: q_classes must be >= 2");
    if (n_features < 1) throw DomainError("Dataset: n_features must be >= 1");
    if (labels.empty()) throw DomainError("Dataset: empty");
    if (features.size() != labels.size() * static_cast<std::size_t>(n_features))
        throw DomainError("Dataset: feature shape mismatch");
    for (int t : labels)
        if (t < 0 || t >= q_classes) throw DomainError("Dataset: label out of range");
}

void SyntheticSpec::validate() const {
    if (n_samples < 1) throw DomainError("SyntheticSpec: n_samples must be >= 1");
    if (n_features < 1) throw DomainError("SyntheticSpec: n_features must be >= 1");
    if (q_classes < 2) throw DomainError("SyntheticSpec: q_classes must be >= 2");
    if (true_weights.size() != static_cast<std::size_t>(n_features))
        throw DomainError("SyntheticSpec: weights length mismatch");
    if (true_thresholds.size() != static_cast<std::size_t>(q_classes - 1))
        throw DomainError("SyntheticSpec: thresholds must have length Q-1");
    for (std::size_t i = 1; i < true_thresholds.size(); ++i)
        if (!(true_thresholds[i - 1] < true_thresholds[i]))
            throw DomainError("SyntheticSpec: thresholds must be strictly increasing");
}

Dataset generate_synthetic(const SyntheticSpec& spec, SyntheticGroundTruth* ground_truth) {
    spec.validate();
    Rng rng(spec.seed);

    Dataset out;
    out.q_classes = spec.q_classes;
    out.n_features = spec.n_features;
    out.features.resize(static_cast<std::size_t>(spec.n_samples) * spec.n_features);
    out.labels.resize(static_cast<std::size_t>(spec.n_samples));

    for (int k = 0; k < spec.n_samples; ++k) {
        double latent = 0.0;
        for (int j = 0; j < spec.n_features; ++j) {
            const double x = rng.normal();
            out.features[static_cast<std::size_t>(k) * spec.n_features + j] = x;
            latent += spec.true_weights[static_cast<std::size_t>(j)] * x;
        }
        double noise = 0.0;
        switch (spec.link) {
            case LinkFunction::Logit: noise = rng.logistic(); break;
            case LinkFunction::Probit: noise = rng.normal(); break;
            case LinkFunction::CLogLog: noise = rng.gumbel_min(); break;
        }
        const double y_star = latent + noise;
        int label = spec.q_classes - 1;
        for (std::size_t t = 0; t < spec.true_thresholds.size(); ++t)
            if (y_star <= spec.true_thresholds[t]) {
                label = static_cast<int>(t);
                break;
            }
        out.labels[static_cast<std::size_t>(k)] = label;
    }

    const auto counts = class_counts(out);
    for (int q = 0; q < spec.q_classes; ++q)
        if (counts[static_cast<std::size_t>(q)] == 0)
            throw GenerationError("generate_synthetic: class " + std::to_string(q) +
                                  " received no samples");

    if (ground_truth) {
        ground_truth->weights = spec.true_weights;
        ground_truth->thresholds = spec.true_thresholds;
        ground_truth->link = spec.link;
        ground_truth->seed = spec.seed;
    }
    return out;
}

namespace {

// direction (1,-1,0.75,-0.75) normalized, scaled to the requested latent scale
std::vector<double> benchmark_weights(double scale) {
    const double norm = std::sqrt(3.125);
    return {scale / norm, -scale / norm, 0.75 * scale / norm, -0.75 * scale / norm};
}

}  // namespace

SyntheticSpec recovery_benchmark_q3(int n_samples, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_samples = n_samples;
    spec.n_features = 4;
    spec.q_classes = 3;
    spec.link = LinkFunction::Logit;
    spec.true_weights = benchmark_weights(10.0);
    spec.true_thresholds = {-4.5, 4.5};
    spec.seed = seed;
    return spec;
}

SyntheticSpec imbalanced_benchmark_q5(int n_samples, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_samples = n_samples;
    spec.n_features = 4;
    spec.q_classes = 5;
    spec.link = LinkFunction::Logit;
    spec.true_weights = benchmark_weights(6.0);
    spec.true_thresholds = {-8.4, -4.8, 1.5, 7.2};
    spec.seed = seed;
    return spec;
}

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_csv: cannot open " + path.string(), 0);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("load_csv: missing header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 2 || header.back() != "label")
        throw ParseError("load_csv: header must be f0,...,f{d-1},label", 1);
    const int d = static_cast<int>(header.size()) - 1;
    for (int j = 0; j < d; ++j)
        if (header[static_cast<std::size_t>(j)] != "f" + std::to_string(j))
            throw ParseError("load_csv: unexpected feature column name", 1);

    Dataset out;
    out.n_features = d;
    long line_no = 1;
    int max_label = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        int col = 0;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            if (col < d) {
                const double v = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str() || *end != '\0')
                    throw ParseError("load_csv: non-numeric cell '" + cell + "'", line_no);
                out.features.push_back(v);
            } else if (col == d) {
                const long lab = std::strtol(cell.c_str(), &end, 10);
                if (end == cell.c_str() || *end != '\0' || lab < 0)
                    throw ParseError("load_csv: bad label '" + cell + "'", line_no);
                out.labels.push_back(static_cast<int>(lab));
                max_label = std::max(max_label, static_cast<int>(lab));
            }
            ++col;
        }
        if (col != d + 1)
            throw ParseError("load_csv: expected " + std::to_string(d + 1) + " columns, got " +
                                 std::to_string(col),
                             line_no);
    }
    if (out.labels.empty()) throw ParseError("load_csv: no data rows", line_no);
    out.q_classes = std::max(2, max_label + 1);
    out.validate();
    return out;
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
    dataset.validate();
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw DomainError("save_csv: cannot open " + path.string());
    for (int j = 0; j < dataset.n_features; ++j) out << "f" << j << ",";
    out << "label\n";
    char buf[64];
    for (std::size_t k = 0; k < dataset.size(); ++k) {
        const auto row = dataset.row(k);
        for (double v : row) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << buf << ",";
        }
        out << dataset.labels[k] << "\n";
    }
    if (!out) throw DomainError("save_csv: write failure on " + path.string());
}

void save_ground_truth(const SyntheticGroundTruth& truth, const std::filesystem::path& path) {
    nlohmann::json j;
    j["weights"] = truth.weights;
    j["thresholds"] = truth.thresholds;
    j["link"] = to_string(truth.link);
    j["seed"] = truth.seed;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("save_ground_truth: cannot open " + path.string());
    out << j.dump(2) << "\n";
}

SyntheticGroundTruth load_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("load_ground_truth: cannot open " + path.string(), 0);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("load_ground_truth: ") + e.what(), 0);
    }
    SyntheticGroundTruth t;
    t.weights = j.at("weights").get<std::vector<double>>();
    t.thresholds = j.at("thresholds").get<std::vector<double>>();
    t.link = link_from_string(j.at("link").get<std::string>());
    t.seed = j.at("seed").get<std::uint64_t>();
    return t;
}

std::vector<std::int64_t> class_counts(const Dataset& dataset) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(dataset.q_classes), 0);
    for (int t : dataset.labels) ++counts[static_cast<std::size_t>(t)];
    return counts;
}

namespace {

void append_sample(Dataset& dst, const Dataset& src, std::size_t index) {
    const auto row = src.row(index);
    dst.features.insert(dst.features.end(), row.begin(), row.end());
    dst.labels.push_back(src.labels[index]);
}

}  // namespace

Splits split(const Dataset& dataset, const SplitFractions& fractions, std::uint64_t seed) {
    dataset.validate();
    if (!(fractions.train > 0.0 && fractions.val > 0.0 && fractions.test > 0.0))
        throw DomainError("split: fractions must be positive");
    if (std::abs(fractions.train + fractions.val + fractions.test - 1.0) > 1e-9)
        throw DomainError("split: fractions must sum to 1");

    Rng rng(seed);
    Splits out;
    for (Dataset* part : {&out.train, &out.val, &out.test}) {
        part->q_classes = dataset.q_classes;
        part->n_features = dataset.n_features;
    }

    // stratified: shuffle within each class, then cut by rounded fractions
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(dataset.q_classes));
    for (std::size_t k = 0; k < dataset.size(); ++k)
        by_class[static_cast<std::size_t>(dataset.labels[k])].push_back(k);

    for (auto& members : by_class) {
        rng.shuffle(members);
        const auto c = static_cast<std::int64_t>(members.size());
        auto n_train = static_cast<std::int64_t>(std::lround(c * fractions.train));
        auto n_val = static_cast<std::int64_t>(std::lround(c * fractions.val));
        n_train = std::min(n_train, c);
        n_val = std::min(n_val, c - n_train);
        for (std::int64_t i = 0; i < c; ++i) {
            Dataset* part = i < n_train ? &out.train : (i < n_train + n_val ? &out.val : &out.test);
            append_sample(*part, dataset, members[static_cast<std::size_t>(i)]);
        }
    }

    for (const auto* part : {&out.train, &out.val, &out.test}) {
        const auto counts = class_counts(*part);
        for (int q = 0; q < dataset.q_classes; ++q)
            if (counts[static_cast<std::size_t>(q)] == 0)
                std::cerr << "warning: split has no samples of class " << q << "\n";
    }
    return out;
}

TrainValSplit split_train_val(const Dataset& dataset, double val_fraction, std::uint64_t seed) {
    dataset.validate();
    if (!(val_fraction > 0.0 && val_fraction < 1.0))
        throw DomainError("split_train_val: val_fraction must be in (0, 1)");

    Rng rng(seed);
    TrainValSplit out;
    for (Dataset* part : {&out.train, &out.val}) {
        part->q_classes = dataset.q_classes;
        part->n_features = dataset.n_features;
    }

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(dataset.q_classes));
    for (std::size_t k = 0; k < dataset.size(); ++k)
        by_class[static_cast<std::size_t>(dataset.labels[k])].push_back(k);

    for (auto& members : by_class) {
        rng.shuffle(members);
        const auto c = static_cast<std::int64_t>(members.size());
        auto n_val = static_cast<std::int64_t>(std::lround(c * val_fraction));
        n_val = std::min(n_val, c);
        for (std::int64_t i = 0; i < c; ++i)
            append_sample(i < n_val ? out.val : out.train, dataset,
                          members[static_cast<std::size_t>(i)]);
    }
    if (out.train.labels.empty() || out.val.labels.empty())
        throw DomainError("split_train_val: a split received no samples");
    return out;
}

Dataset balance_oversample(const Dataset& dataset, std::uint64_t seed) {
    dataset.validate();
    const auto counts = class_counts(dataset);
    std::int64_t majority = 0;
    for (int q = 0; q < dataset.q_classes; ++q) {
        if (counts[static_cast<std::size_t>(q)] == 0)
            throw DomainError("balance_oversample: class " + std::to_string(q) + " is empty");
        majority = std::max(majority, counts[static_cast<std::size_t>(q)]);
    }

    Rng rng(seed);
    Dataset out = dataset;
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(dataset.q_classes));
    for (std::size_t k = 0; k < dataset.size(); ++k)
        by_class[static_cast<std::size_t>(dataset.labels[k])].push_back(k);

    for (int q = 0; q < dataset.q_classes; ++q) {
        const auto& members = by_class[static_cast<std::size_t>(q)];
        for (std::int64_t extra = majority - counts[static_cast<std::size_t>(q)]; extra > 0;
             --extra)
            append_sample(out, dataset, members[rng.below(members.size())]);
    }
    return out;
}

}  // namespace ordinal
