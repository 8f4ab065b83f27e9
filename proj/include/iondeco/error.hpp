#pragma once

#include <stdexcept>
#include <string>

namespace iondeco {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or parameters (bad ranges, degenerate inputs).
class InputError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of its subdivision budget.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double estimate, double error_estimate)
        : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

    double estimate() const noexcept { return estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double estimate_;
    double error_estimate_;
};

/// ODE integration failed its accuracy check or produced non-finite values.
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// An internal identity did not hold; indicates a bug rather than a physics outcome.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// File I/O failures; the message carries the path.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace iondeco
