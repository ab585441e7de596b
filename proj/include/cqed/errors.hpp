#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad index, mismatched Hilbert spaces, malformed parameters.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The Fock cutoff is too small for the requested state or operator.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// A closed-form expression was evaluated outside the parameter domain
/// where it is defined (e.g. a coupling node, or κ ≠ 0 for a κ = 0 formula).
class DomainError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class DegenerateSteadyState : public SolverError {
public:
    DegenerateSteadyState(int null_dimension, const std::string& detail)
        : SolverError("degenerate steady state: null-space dimension " +
                      std::to_string(null_dimension) + " (" + detail + ")"),
          null_dimension_(null_dimension) {}

    [[nodiscard]] int null_dimension() const noexcept { return null_dimension_; }

private:
    int null_dimension_;
};

class StepSizeUnderflow : public SolverError {
public:
    using SolverError::SolverError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace cqed
