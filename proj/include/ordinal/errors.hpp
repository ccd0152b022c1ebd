#pragma once

#include <stdexcept>
#include <string>

namespace ordinal {

/// Invalid argument or malformed input (maps to CLI exit code 3).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Eq.-style metric is 0/0 (e.g. all mass in one class for both raters).
struct UndefinedMetricError : DomainError {
    explicit UndefinedMetricError(const std::string& msg) : DomainError(msg) {}
};

/// Non-finite loss or gradient during training (maps to CLI exit code 4).
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& msg, long param_index)
        : std::runtime_error(msg), param_index(param_index) {}
    long param_index;
};

/// CSV / JSON parse failure, carries a 1-based line number when known.
struct ParseError : DomainError {
    ParseError(const std::string& msg, long line)
        : DomainError(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
          line(line) {}
    long line;
};

/// Synthetic generation produced an empty class.
struct GenerationError : DomainError {
    explicit GenerationError(const std::string& msg) : DomainError(msg) {}
};

/// Decision rule not applicable to the model (interval rule on a nominal model).
struct UnsupportedRuleError : DomainError {
    explicit UnsupportedRuleError(const std::string& msg) : DomainError(msg) {}
};

}  // namespace ordinal
