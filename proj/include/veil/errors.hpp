#pragma once

#include <stdexcept>
#include <string>

namespace veil {

// Base class for everything this library throws.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed distribution or out-of-domain argument.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A guard or validation rejected a scenario before any step ran.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Sender-side misuse: wrong knowledge of the interference bit, or an
// emission outside the permitted strength range.
class ProtocolError : public Error {
public:
    using Error::Error;
};

// 2D scene violates a geometric precondition.
class GeometryError : public Error {
public:
    using Error::Error;
};

// A reading with zero likelihood under both hypotheses.
class ImpossibleObservationError : public Error {
public:
    using Error::Error;
};

// Requested a sample-size bound for an indistinguishable hypothesis pair;
// no finite number of readings ever separates them.
class PerfectHidingError : public Error {
public:
    using Error::Error;
};

// Numerical routine failed to converge. Maps to a distinct CLI exit code.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace veil
