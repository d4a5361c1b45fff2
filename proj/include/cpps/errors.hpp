#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cpps {

/// Lexical or grammatical error in an input text, with 1-based position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line, int column)
        : std::runtime_error(message + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Invalid configuration; carries every violation found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string out = "invalid configuration:";
        for (const auto& issue : issues) out += "\n  - " + issue;
        return out;
    }

    std::vector<std::string> issues_;
};

/// Engine contract violation: duplicate registration, unresolved stream,
/// out-of-order push, dependency cycle.
class EngineError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression-evaluation failure (type mismatch, unbound variable, division
/// by zero). Caught at query level and recorded in the emission.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cpps
