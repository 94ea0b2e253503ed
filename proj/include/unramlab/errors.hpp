#pragma once

#include <stdexcept>
#include <string>

namespace unram {

// All domain errors derive from UnramError so the CLI can map them to exit code 2.
struct UnramError : std::runtime_error {
    explicit UnramError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotCoprime : UnramError {
    explicit NotCoprime(const std::string& msg) : UnramError(msg) {}
};

struct NotInSubfield : UnramError {
    explicit NotInSubfield(const std::string& msg) : UnramError(msg) {}
};

struct NotIntegral : UnramError {
    explicit NotIntegral(const std::string& msg) : UnramError(msg) {}
};

struct OrderCapExceeded : UnramError {
    explicit OrderCapExceeded(const std::string& msg) : UnramError(msg) {}
};

struct UnsupportedParameter : UnramError {
    explicit UnsupportedParameter(const std::string& msg) : UnramError(msg) {}
};

struct SchemaError : UnramError {
    explicit SchemaError(const std::string& msg) : UnramError(msg) {}
};

// Raised when an internal consistency guard fails (e.g. orthogonality of a
// computed character table). Signals a bug, not bad user input.
struct InternalInconsistency : UnramError {
    explicit InternalInconsistency(const std::string& msg) : UnramError(msg) {}
};

struct SizeMismatch : UnramError {
    explicit SizeMismatch(const std::string& msg) : UnramError(msg) {}
};

struct BoundExceeded : UnramError {
    explicit BoundExceeded(const std::string& msg) : UnramError(msg) {}
};

struct InvalidShape : UnramError {
    explicit InvalidShape(const std::string& msg) : UnramError(msg) {}
};

struct ParseError : UnramError {
    explicit ParseError(const std::string& msg) : UnramError(msg) {}
};

struct OrbitActionUndefined : UnramError {
    explicit OrbitActionUndefined(const std::string& msg) : UnramError(msg) {}
};

} // namespace unram
