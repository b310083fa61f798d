#pragma once

#include <stdexcept>
#include <string>

namespace rankfuse {

/// Raised when input data breaks a domain invariant (bad ballot, NaN score, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed files: message carries the path and row/column.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for invalid run configuration (weights, ballot depth, manifest keys).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rankfuse
