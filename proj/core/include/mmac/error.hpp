#pragma once

#include <stdexcept>
#include <string>

namespace mmac {

/// Root of every exception thrown by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class domain_error : public error {
public:
    using error::error;
};

/// Vector length does not match the configured symbol-length ratio.
class shape_error : public error {
public:
    using error::error;
};

/// Valid input that this implementation deliberately does not handle
/// (e.g. ML search beyond its complexity guard).
class unsupported_error : public error {
public:
    using error::error;
};

/// Input that makes a detector statistic undefined (zero-norm MRC weights).
class degenerate_input_error : public error {
public:
    using error::error;
};

/// Malformed or inconsistent configuration file.
class config_error : public error {
public:
    using error::error;
};

/// Base for root-finding and quadrature failures.
class numerical_error : public error {
public:
    using error::error;
};

class bracket_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

class convergence_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate so
/// far so callers can decide whether it is usable.
class quadrature_error : public numerical_error {
public:
    quadrature_error(const std::string& what, double partial, double error_estimate)
        : numerical_error(what), partial_(partial), error_estimate_(error_estimate) {}

    double partial_estimate() const noexcept { return partial_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double partial_;
    double error_estimate_;
};

} // namespace mmac
