#pragma once

#include <stdexcept>
#include <string>

namespace uasnet {

// Invalid configuration value. field() names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A decision or command that is not legal in the current state.
class ActionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No alive sensor is left to schedule.
class EmptyActionSpaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Brute-force search would exceed its expansion guard.
class OracleScopeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Metrics cannot be combined (incomplete episode, mismatched axes).
class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace uasnet
