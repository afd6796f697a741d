#pragma once

#include <stdexcept>
#include <string>

namespace polaron {

// Every failure raised by the core derives from Error. The C layer maps the
// concrete type onto a status code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain (negative frequency, T < 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Malformed construction parameters (Lambda <= 1, M < 1, n_max < 8, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// Shape mismatch between a state, a bath or a caller buffer.
class DimensionError : public Error {
public:
    using Error::Error;
};

// <Psi|Psi> too small to form a Rayleigh quotient.
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

// Iterative procedure stopped before reaching its tolerance. last_estimate
// carries the final iterate's scalar (Delta_R, integral estimate, eigenvalue).
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_estimate)
        : Error(what), last_estimate_(last_estimate) {}

    double last_estimate() const noexcept { return last_estimate_; }

private:
    double last_estimate_;
};

// JSON documents that do not follow the dump schema.
class FormatError : public Error {
public:
    using Error::Error;
};

} // namespace polaron
