#pragma once

#include <stdexcept>
#include <string>

namespace protmeas {

/// Invalid construction parameters (bad grid, non-Hermitian observable, ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation called outside its mathematical domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Operation has no closed form for the given profile kind.
class UnsupportedProfileError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested work exceeds a hard cost cap (e.g. Dyson order > 6).
class CostCapError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Too few samples for a statistical fit.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reading or writing an artifact failed.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine failed to reach its tolerance. Carries the achieved
/// error estimate so callers can decide whether the value is still usable.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double estimate)
        : std::runtime_error(what), estimate_(estimate) {}

    double estimate() const noexcept { return estimate_; }

private:
    double estimate_;
};

/// Configuration parse/validation failure, tagged with the offending field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace protmeas
