#pragma once

#include <filesystem>
#include <string>

#include "ordinal/trainer.hpp"

namespace ordinal {

/// Lossless text form of a double ("%a" hex-float).
std::string hex_double(double value);
double parse_hex_double(const std::string& text);

/// ModelBundle <-> JSON with hex-float parameters (bit-exact round trip).
std::string serialize_model(const ModelBundle& model);
ModelBundle deserialize_model(const std::string& json_text);

void save_model(const ModelBundle& model, const std::filesystem::path& path);
ModelBundle load_model(const std::filesystem::path& path);

/// History as JSON lines, one record per epoch plus a trailing summary record.
/// wall_time is deliberately not serialized.
std::string serialize_history(const TrainingHistory& history);
void save_history(const TrainingHistory& history, const std::filesystem::path& path);

/// Report CSV with exactly the spec'd fields; an undefined QWK is written as
/// the literal `undefined`.
std::string report_to_csv(const EvaluationReport& report);
void save_report(const EvaluationReport& report, const std::filesystem::path& path);

}  // namespace ordinal
