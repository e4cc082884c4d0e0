#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctx {

/// Syntax-level failure while reading one of the text formats
/// (snapshot files, manifests, CSV streams, config files).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::string token, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message +
                             (token.empty() ? "" : " (near '" + token + "')")),
          line_(line),
          token_(std::move(token)) {}

    std::size_t line() const { return line_; }
    const std::string& token() const { return token_; }

private:
    std::size_t line_;
    std::string token_;
};

/// Raised when an operation requires a valid snapshot but validation
/// reported violations. The formatted message lists them.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& message) : std::runtime_error(message) {}
};

/// Internal inconsistency in a run report (summary tallies that do not
/// match the step log).
class IntegrityError : public std::runtime_error {
public:
    explicit IntegrityError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace ctx
