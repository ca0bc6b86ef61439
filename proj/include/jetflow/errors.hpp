#pragma once

#include <stdexcept>
#include <string>

namespace jetflow {

/// Syntax error while parsing an expression; `offset` is the byte offset
/// into the source text where parsing failed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Unbound variable or numeric domain error (log of non-positive value,
/// division by zero, non-integer power of a negative base, ...).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate metric, signature mismatch, or dimension mismatch.
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violation of the complete integrability conditions of a sheet system.
class IntegrabilityError : public std::runtime_error {
public:
    IntegrabilityError(const std::string& msg, double max_violation)
        : std::runtime_error(msg), max_violation_(max_violation) {}
    double max_violation() const noexcept { return max_violation_; }

private:
    double max_violation_;
};

/// Malformed problem file or unsupported request.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace jetflow
