#pragma once

#include <stdexcept>
#include <string>

namespace pgreen {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument sits on a pole of a Gamma function or similar.
class PoleError : public Error {
public:
    using Error::Error;
};

/// An iterative evaluation (continued fraction, series, quadrature) did not converge.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Argument outside the supported domain of a kernel.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Argument on a branch cut where the requested branch is undefined.
class BranchError : public Error {
public:
    using Error::Error;
};

/// Parameter combination makes a closed form singular.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace pgreen
