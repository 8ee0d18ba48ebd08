#pragma once

#include <stdexcept>
#include <string>

namespace meneuron {

/// Malformed configuration, bad CLI arguments, unreadable input files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integration produced non-finite or runaway values.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, long long step)
        : std::runtime_error(what), step_(step) {}
    long long step() const noexcept { return step_; }

private:
    long long step_;
};

/// Basis angles that do not define an invertible transform, or a planar fit
/// that does not support the constant-slope premise.
class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Query outside the validated domain of a lookup table or operating window.
class DomainError : public std::runtime_error {
public:
    DomainError(const std::string& what, double time = 0.0)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Not enough dwell samples for a requested statistic.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace meneuron
