#pragma once

#include <stdexcept>
#include <string>

namespace inloop {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- parameter validation -------------------------------------------------

class InvalidParameter : public Error {
public:
    using Error::Error;
};

/// A decay rate, frequency or mass that must be > 0 is not.
class NonPositiveRate final : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

/// Feedback strong enough that zeta >= kappa; the feedback-modified decay
/// rate and the noise normalization are undefined there.
class FeedbackOverdrive final : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

class NegativeCooperativity final : public InvalidParameter {
public:
    using InvalidParameter::InvalidParameter;
};

// --- numerical failures ----------------------------------------------------

class NumericalError : public Error {
public:
    using Error::Error;
};

/// (A + i omega I) is singular to working precision; happens exactly at
/// instability thresholds where a pole sits on the real frequency axis.
class SingularAtFrequency final : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Mechanical response below the underflow guard; added noise undefined.
class ZeroResponse final : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EigenFailure final : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Bisection endpoints classify identically; no boundary in the interval.
class NoSignChange final : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The response never falls to half its resonant value inside the window.
class NoHalfCrossing final : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// --- configuration / I/O ----------------------------------------------------

class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError final : public ConfigError {
public:
    ParseError(int line, const std::string& message)
        : ConfigError("line " + std::to_string(line) + ": " + message), line_(line) {}
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

class ConflictingKeys final : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class MissingKey final : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class IoError final : public Error {
public:
    using Error::Error;
};

}  // namespace inloop
