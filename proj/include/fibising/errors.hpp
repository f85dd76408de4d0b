#pragma once

#include <stdexcept>
#include <string>

namespace fibising {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A request that would exceed a configured memory or size cap.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Floating point failure: overflow without a certificate, non-finite
/// input, solver non-convergence.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (CLI and config files).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fibising
