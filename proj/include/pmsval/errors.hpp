#pragma once

#include <stdexcept>
#include <string>

namespace pmsval {

/// Base of every error raised by the library. The CLI maps the three
/// families below onto exit codes 2, 3 and 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (exit code 2).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A mathematical invariant does not hold for the supplied data (exit code 3).
class InvariantError : public Error {
public:
    InvariantError(std::string invariant, const std::string& detail)
        : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

    const std::string& invariant() const noexcept { return invariant_; }

private:
    std::string invariant_;
};

/// The finite data cannot witness a "sufficiently large" statement (exit code 4).
class IndeterminateError : public Error {
public:
    using Error::Error;
};

class DescriptorMismatch : public InvariantError {
public:
    explicit DescriptorMismatch(const std::string& detail)
        : InvariantError("descriptor-mismatch", detail) {}
};

class InvalidAdjoin : public InvariantError {
public:
    explicit InvalidAdjoin(const std::string& detail)
        : InvariantError("invalid-adjoin", detail) {}
};

class UnsupportedArithmetic : public InvariantError {
public:
    explicit UnsupportedArithmetic(const std::string& detail)
        : InvariantError("unsupported-arithmetic", detail) {}
};

class NotAPms : public InvariantError {
public:
    explicit NotAPms(const std::string& detail) : InvariantError("not-a-pms", detail) {}
};

class InvalidConfiguration : public InvariantError {
public:
    explicit InvalidConfiguration(const std::string& detail)
        : InvariantError("invalid-configuration", detail) {}
};

class WrongKind : public InvariantError {
public:
    explicit WrongKind(const std::string& detail) : InvariantError("wrong-kind", detail) {}
};

}  // namespace pmsval
