#pragma once

#include <stdexcept>
#include <string>

namespace polyharm {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Structural misuse: mismatched jet shapes, bad indices, wrong dimensions.
struct ShapeError : Error {
    using Error::Error;
};

// A derivative order budget was exhausted (or an extraction beyond the
// truncation order was requested). Carries the order that would have been
// needed when known.
struct OrderError : Error {
    int required = -1;
    explicit OrderError(const std::string& msg, int required_order = -1)
        : Error(msg), required(required_order) {}
};

// Math domain violations: log/sqrt of a non-positive constant term,
// division by a jet with zero constant term, singular metric.
struct NumericDomainError : Error {
    using Error::Error;
};

// Expression text could not be parsed; offset is the byte position.
struct ParseError : Error {
    std::size_t offset;
    ParseError(const std::string& msg, std::size_t at)
        : Error(msg + " at offset " + std::to_string(at)), offset(at) {}
};

// Invalid run configuration.
struct ConfigError : Error {
    using Error::Error;
};

// A map left its chart (domain box or target chart validity region).
struct ChartError : Error {
    using Error::Error;
};

}  // namespace polyharm
