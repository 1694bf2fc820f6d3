#pragma once

#include <stdexcept>
#include <string>

namespace rentsim {

/// Base of every error the engine throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), file_(file), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// Well-formed text that violates a structural rule (duplicate year, missing key).
class SchemaError : public ParseError {
public:
    using ParseError::ParseError;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// A required year is absent from a market series.
class CoverageError : public Error {
public:
    using Error::Error;
};

class BaselineUnavailable : public Error {
public:
    using Error::Error;
};

/// Refusal to rebuild a year that carries reported financial statements.
class ReconstructionRefused : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class AuctionFailed : public Error {
public:
    using Error::Error;
};

/// Transition attempted from a terminal concession state.
class StateMachineViolation : public Error {
public:
    using Error::Error;
};

}  // namespace rentsim
