#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Base class for all library errors. The concrete category decides the CLI
// exit code: configuration -> 2, resource -> 3, numerical -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid sizes, dimension mismatches, unsupported parameter combinations.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

// A computation would exceed a configured memory or size budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Solver non-convergence or a failed numerical consistency check.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Fixed-precision arithmetic cannot represent the requested result.
class PrecisionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace qwalk
