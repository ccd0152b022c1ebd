#include "ordinal/model_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ordinal/errors.hpp"

namespace ordinal {

using nlohmann::json;

std::string hex_double(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", value);
    return buf;
}

double parse_hex_double(const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw ParseError("parse_hex_double: bad float '" + text + "'", 0);
    return v;
}

namespace {

json hex_vector(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(hex_double(x));
    return arr;
}

std::vector<double> parse_hex_vector(const json& arr) {
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& x : arr) out.push_back(parse_hex_double(x.get<std::string>()));
    return out;
}

json config_to_json(const TrainingConfig& c) {
    json j;
    j["link"] = c.link_name();
    j["eta0"] = hex_double(c.eta0);
    j["batch_size"] = c.batch_size;
    j["max_epochs"] = c.max_epochs;
    j["seed"] = c.seed;
    j["balance"] = c.balance;
    j["hidden"] = c.hidden;
    return j;
}

TrainingConfig config_from_json(const json& j) {
    TrainingConfig c;
    const auto link = j.at("link").get<std::string>();
    if (link != "nominal") c.link = link_from_string(link);
    c.eta0 = parse_hex_double(j.at("eta0").get<std::string>());
    c.batch_size = j.at("batch_size").get<int>();
    c.max_epochs = j.at("max_epochs").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.balance = j.at("balance").get<bool>();
    c.hidden = j.at("hidden").get<std::vector<int>>();
    return c;
}

}  // namespace

std::string serialize_model(const ModelBundle& model) {
    model.validate();
    json j;
    j["format_version"] = model.format_version;
    j["q_classes"] = model.q_classes;
    j["link"] = model.link ? to_string(*model.link) : "nominal";
    j["created_by"] = model.created_by;
    j["seed"] = model.seed;
    j["config"] = config_to_json(model.config);

    json backbone;
    backbone["input_dim"] = model.backbone.spec.input_dim;
    backbone["hidden"] = model.backbone.spec.hidden;
    backbone["output_dim"] = model.backbone.spec.output_dim;
    json weights = json::array();
    json biases = json::array();
    for (std::size_t l = 0; l < model.backbone.weights.size(); ++l) {
        weights.push_back(hex_vector(model.backbone.weights[l]));
        biases.push_back(hex_vector(model.backbone.biases[l]));
    }
    backbone["weights"] = weights;
    backbone["biases"] = biases;
    j["backbone"] = backbone;

    if (model.clm) {
        json clm;
        clm["b1"] = hex_double(model.clm->b1);
        clm["alpha"] = hex_vector(model.clm->alpha);
        clm["tau"] = hex_double(model.clm->tau);
        j["clm"] = clm;
    }
    return j.dump(2) + "\n";
}

ModelBundle deserialize_model(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("deserialize_model: ") + e.what(), 0);
    }
    ModelBundle model;
    model.format_version = j.at("format_version").get<int>();
    if (model.format_version != 1)
        throw ParseError("deserialize_model: unsupported format_version", 0);
    model.q_classes = j.at("q_classes").get<int>();
    const auto link = j.at("link").get<std::string>();
    if (link != "nominal") model.link = link_from_string(link);
    model.created_by = j.at("created_by").get<std::string>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.config = config_from_json(j.at("config"));

    const auto& backbone = j.at("backbone");
    model.backbone.spec.input_dim = backbone.at("input_dim").get<int>();
    model.backbone.spec.hidden = backbone.at("hidden").get<std::vector<int>>();
    model.backbone.spec.output_dim = backbone.at("output_dim").get<int>();
    for (const auto& w : backbone.at("weights")) model.backbone.weights.push_back(parse_hex_vector(w));
    for (const auto& b : backbone.at("biases")) model.backbone.biases.push_back(parse_hex_vector(b));

    if (j.contains("clm")) {
        ClmParameters clm;
        clm.q_classes = model.q_classes;
        clm.b1 = parse_hex_double(j["clm"].at("b1").get<std::string>());
        clm.alpha = parse_hex_vector(j["clm"].at("alpha"));
        clm.tau = parse_hex_double(j["clm"].at("tau").get<std::string>());
        model.clm = std::move(clm);
    }
    model.validate();
    return model;
}

void save_model(const ModelBundle& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("save_model: cannot open " + path.string());
    out << serialize_model(model);
}

ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("load_model: cannot open " + path.string(), 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return deserialize_model(ss.str());
}

namespace {

std::string decimal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string table_decimal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string serialize_history(const TrainingHistory& history) {
    std::ostringstream out;
    for (const auto& rec : history.epochs) {
        json j;
        j["epoch"] = rec.epoch;
        j["lr"] = decimal(rec.lr);
        j["train_loss"] = decimal(rec.train_loss);
        j["val_qwk"] = decimal(rec.val_qwk);
        j["val_qwk_defined"] = rec.val_qwk_defined;
        j["val_mae"] = decimal(rec.val_mae);
        out << j.dump() << "\n";
    }
    json summary;
    summary["best_epoch"] = history.best_epoch;
    summary["diverged"] = history.diverged;
    summary["total_steps"] = history.total_steps;
    out << summary.dump() << "\n";
    return out.str();
}

void save_history(const TrainingHistory& history, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("save_history: cannot open " + path.string());
    out << serialize_history(history);
}

std::string report_to_csv(const EvaluationReport& report) {
    std::ostringstream out;
    out << "qwk,ms,mae,ccr,top2,top3,one_off,confusion\n";
    if (report.qwk_defined)
        out << table_decimal(report.qwk);
    else
        out << "undefined";
    out << "," << table_decimal(report.ms) << "," << table_decimal(report.mae) << ","
        << table_decimal(report.ccr) << "," << table_decimal(report.top2) << ","
        << table_decimal(report.top3) << "," << table_decimal(report.one_off) << ",";
    for (std::size_t i = 0; i < report.confusion.counts.size(); ++i) {
        if (i) out << ";";
        out << report.confusion.counts[i];
    }
    out << "\n";
    return out.str();
}

void save_report(const EvaluationReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("save_report: cannot open " + path.string());
    out << report_to_csv(report);
}

}  // namespace ordinal
