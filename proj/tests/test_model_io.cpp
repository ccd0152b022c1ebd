#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "ordinal/data.hpp"
#include "ordinal/errors.hpp"
#include "ordinal/model_io.hpp"
#include "ordinal/rng.hpp"
#include "ordinal/trainer.hpp"

using namespace ordinal;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ordinal_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

TrainResult quick_train(std::optional<LinkFunction> link, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n_samples = 200;
    spec.n_features = 2;
    spec.q_classes = 3;
    spec.link = LinkFunction::Logit;
    spec.true_weights = {2.0, -2.0};
    spec.true_thresholds = {-1.5, 1.5};
    spec.seed = seed;
    const auto data = generate_synthetic(spec);

    TrainingConfig config;
    config.link = link;
    config.eta0 = 1e-2;
    config.batch_size = 25;
    config.max_epochs = 4;
    config.seed = seed;
    config.hidden = {6};
    return train(config, data, data);
}

}  // namespace

TEST_CASE("hex float encoding is lossless for awkward values") {
    Rng rng(5150);
    for (int rep = 0; rep < 5000; ++rep) {
        const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.below(80)) - 40);
        const double back = parse_hex_double(hex_double(v));
        CHECK(std::memcmp(&v, &back, sizeof v) == 0);
    }
    for (double v : {0.0, -0.0, 1e-300, -1e300, 0.1, 1.0 / 3.0}) {
        const double back = parse_hex_double(hex_double(v));
        CHECK(std::memcmp(&v, &back, sizeof v) == 0);
    }
    CHECK_THROWS_AS(parse_hex_double("zzz"), ParseError);
    CHECK_THROWS_AS(parse_hex_double("0x1p1 trailing"), ParseError);
}

TEST_CASE("model round trip is bit exact (ordinal)") {
    const auto result = quick_train(LinkFunction::Probit, 41);
    const std::string text = serialize_model(result.model);
    const auto back = deserialize_model(text);
    CHECK(flatten_parameters(back) == flatten_parameters(result.model));
    CHECK(back.q_classes == result.model.q_classes);
    CHECK(back.link == result.model.link);
    CHECK(back.seed == result.model.seed);
    CHECK(back.config.eta0 == result.model.config.eta0);
    CHECK(back.config.hidden == result.model.config.hidden);
    CHECK(back.created_by == result.model.created_by);
    // serialization is stable: a second pass emits the same bytes
    CHECK(serialize_model(back) == text);
}

TEST_CASE("model round trip is bit exact (nominal)") {
    const auto result = quick_train(std::nullopt, 42);
    CHECK(result.model.is_nominal());
    const auto back = deserialize_model(serialize_model(result.model));
    CHECK(back.is_nominal());
    CHECK_FALSE(back.clm.has_value());
    CHECK(flatten_parameters(back) == flatten_parameters(result.model));
}

TEST_CASE("model files save and load through the filesystem") {
    TempDir tmp;
    const auto result = quick_train(LinkFunction::Logit, 43);
    const auto path = tmp.path / "model.json";
    save_model(result.model, path);
    const auto back = load_model(path);
    CHECK(flatten_parameters(back) == flatten_parameters(result.model));
    CHECK_THROWS_AS(load_model(tmp.path / "absent.json"), ParseError);
}

TEST_CASE("deserializer rejects corrupt input") {
    const auto result = quick_train(LinkFunction::Logit, 44);
    const std::string text = serialize_model(result.model);
    CHECK_THROWS_AS(deserialize_model("not json"), ParseError);
    CHECK_THROWS_AS(deserialize_model("{}"), std::exception);

    // wrong format version
    std::string v2 = text;
    const auto pos = v2.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    v2.replace(pos, std::strlen("\"format_version\": 1"), "\"format_version\": 2");
    CHECK_THROWS_AS(deserialize_model(v2), ParseError);
}

TEST_CASE("history serialization: one line per epoch plus a summary") {
    const auto result = quick_train(LinkFunction::Logit, 45);
    const std::string text = serialize_history(result.history);
    std::istringstream in(text);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) {
        ++lines;
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
    }
    CHECK(lines == result.history.epochs.size() + 1);
    CHECK(text.find("\"best_epoch\"") != std::string::npos);
    CHECK(text.find("\"diverged\"") != std::string::npos);
    CHECK(text.find("\"total_steps\"") != std::string::npos);
    CHECK(text.find("\"val_qwk\"") != std::string::npos);
    // timing is environment noise and must never land in the file
    CHECK(text.find("wall_time") == std::string::npos);
}

TEST_CASE("history file write") {
    TempDir tmp;
    const auto result = quick_train(LinkFunction::Logit, 46);
    const auto path = tmp.path / "history.jsonl";
    save_history(result.history, path);
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == serialize_history(result.history));
}

TEST_CASE("report CSV layout") {
    EvaluationReport report;
    report.qwk = 0.87654321;
    report.ms = 0.5;
    report.mae = 0.125;
    report.ccr = 0.75;
    report.top2 = 0.875;
    report.top3 = 1.0;
    report.one_off = 0.9375;
    report.confusion = ConfusionMatrix(2);
    report.confusion.at(0, 0) = 3;
    report.confusion.at(0, 1) = 1;
    report.confusion.at(1, 1) = 4;

    const std::string csv = report_to_csv(report);
    std::istringstream in(csv);
    std::string header;
    std::string row;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, row));
    CHECK(header == "qwk,ms,mae,ccr,top2,top3,one_off,confusion");
    CHECK(row == "0.876543,0.5,0.125,0.75,0.875,1,0.9375,3;1;0;4");
    std::string extra;
    CHECK_FALSE(std::getline(in, extra));
}

TEST_CASE("undefined QWK is written as a literal") {
    EvaluationReport report;
    report.qwk = std::nan("");
    report.qwk_defined = false;
    report.confusion = ConfusionMatrix(2);
    report.confusion.at(1, 1) = 2;
    report.ms = 1.0;
    report.ccr = 1.0;
    const std::string csv = report_to_csv(report);
    CHECK(csv.find("undefined,1,") != std::string::npos);
    CHECK(csv.find("nan") == std::string::npos);
}
