#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cgnet {

/// Raised when a degree exceeds the precomputed factorial tables.
class CapacityError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Invalid arguments: shape mismatches, triangle violations, bad band limits.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation produced a non-finite value.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, std::ptrdiff_t example_index = -1)
        : std::runtime_error(what), example_index_(example_index) {}

    /// Index of the offending example within its batch, or -1 if not tied to one.
    std::ptrdiff_t example_index() const noexcept { return example_index_; }

private:
    std::ptrdiff_t example_index_;
};

/// Malformed configuration or manifest text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// File-level I/O failure (missing file, bad magic, truncated blob).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cgnet
