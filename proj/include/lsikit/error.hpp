#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lsikit {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A precondition on an argument (range, sign, symmetry, ...) was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Operand shapes do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace lsikit
