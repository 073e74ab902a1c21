#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gqa {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotPsd : public Error {
public:
    using Error::Error;
};

class ArityMismatch : public Error {
public:
    using Error::Error;
};

/// Raised by the causal interpreter on a generator outside the causal fragment.
class NotCausal : public Error {
public:
    explicit NotCausal(std::string generator)
        : Error("generator '" + generator + "' is not in the causal fragment")
        , generator_(std::move(generator))
    {}
    const std::string& generator() const noexcept { return generator_; }

private:
    std::string generator_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message)
        , line_(line)
        , column_(column)
    {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class TypeError : public Error {
public:
    using Error::Error;
};

class InfeasibleObservation : public Error {
public:
    using Error::Error;
};

} // namespace gqa
