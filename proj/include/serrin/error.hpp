#pragma once

#include <stdexcept>
#include <string>

namespace serrin {

/// Base of all library errors. Numerical routines throw; the CLI maps
/// ConfigError to exit code 2 and everything else to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Quadrature grid too coarse for the requested harmonic degree.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Shape function leaves the admissible set 0 < phi < pi/2.
class AdmissibilityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Caller violated a documented precondition (e.g. not at a root).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Iterative method or linear solve failed.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Root bracket without a sign change.
class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Invalid run configuration (CLI level).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace serrin
