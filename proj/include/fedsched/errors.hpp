#pragma once

#include <stdexcept>
#include <string>

namespace fedsched {

// Base for every error raised by the simulator library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A simulator invariant was broken (overcommit, illegal phase transition, ...).
// This is always a bug in the simulation, never a user error.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

class BindError : public Error {
public:
    using Error::Error;
};

// Concurrent accounting made the placement infeasible. The pod must be re-queued.
class BindConflict : public BindError {
public:
    using BindError::BindError;
};

class QuotaExceeded : public BindError {
public:
    using BindError::BindError;
};

class NamespaceNotAdmitted : public BindError {
public:
    using BindError::BindError;
};

class UnknownCluster : public Error {
public:
    using Error::Error;
};

class HubInLeaves : public Error {
public:
    using Error::Error;
};

class NoTargets : public Error {
public:
    using Error::Error;
};

class EmptyQueue : public Error {
public:
    using Error::Error;
};

// An event handler tried to schedule an event before the current clock.
class CausalityError : public InvariantViolation {
public:
    using InvariantViolation::InvariantViolation;
};

// Configuration could not be parsed or validated. `where` is a line:column or
// a dotted field path.
class ConfigError : public Error {
public:
    ConfigError(std::string where, const std::string& what)
        : Error(where.empty() ? what : where + ": " + what)
        , where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

} // namespace fedsched
