#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linefield {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed expression text. Carries the byte offset of the failure.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : Error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Evaluation left the domain of definition (division by zero, sqrt of a
// negative, ...). The message names the offending subexpression.
class EvalError : public Error {
public:
    using Error::Error;
};

// A metric failed the SPD check at a queried point.
class MetricError : public Error {
public:
    using Error::Error;
};

// An operation was asked to act where one of the fields vanishes (or the
// caller violated a stated precondition in some other detectable way).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// The linear field falls outside the normal-form construction
// (equal-diagonal form has a zero off-diagonal entry and the matrix is not a
// scaled rotation: the defective repeated-eigenvalue case).
class NonGenericLinearization : public Error {
public:
    using Error::Error;
};

// A numerical procedure could not certify its result (unsafe angle
// unwrapping, non-convergence, residue too large, ...).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

// Bad scenario file or command-line configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace linefield
