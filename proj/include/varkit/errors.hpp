#pragma once

#include <stdexcept>
#include <string>

namespace varkit {

/// Raised when inputs violate a documented precondition: malformed files,
/// out-of-order dates, non-finite values, inconsistent panel shapes.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical procedure cannot produce a result: failed
/// bootstrap brackets, singular fit designs, non-positive scale functions.
class ComputationError : public std::runtime_error {
public:
    explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on filesystem failures: missing input files, unwritable outputs.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace varkit
