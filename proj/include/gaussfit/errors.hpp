#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gaussfit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A fit could not produce a Gaussian. The CLI maps these to exit code 3.
class FitError : public Error {
public:
    using Error::Error;
};

/// Fitted log-quadratic has c >= 0, i.e. the shape is not a Gaussian.
class NonNegativeCurvature : public FitError {
public:
    using FitError::FitError;
};

/// Fewer than three samples carry both positive weight and positive amplitude.
class InsufficientSamples : public FitError {
public:
    using FitError::FitError;
};

/// Normal equations are numerically singular.
class SingularSystem : public FitError {
public:
    using FitError::FitError;
};

/// Peak-outward selection kept nothing (even the peak is below threshold).
class EmptySelection : public FitError {
public:
    using FitError::FitError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed spectrum text. `line()` is 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace gaussfit
