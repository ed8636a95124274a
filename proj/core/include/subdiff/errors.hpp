#pragma once

#include <stdexcept>
#include <string>

namespace subdiff {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation could not reach the requested precision. Carries the
/// achieved error estimate so callers can decide whether to accept.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_estimate(achieved) {}
    double achieved_estimate;
};

/// Contraction-gate rejection: the fixed-point iteration was not started
/// because the contraction constant is >= 1.
class GateError : public std::runtime_error {
public:
    GateError(const std::string& what, double delta_derivation, double delta_theorem)
        : std::runtime_error(what),
          delta_derivation(delta_derivation),
          delta_theorem(delta_theorem) {}
    double delta_derivation;
    double delta_theorem;
};

/// Expression evaluation hit a forbidden operation (division by zero,
/// even root of a negative number).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace subdiff
