// Exception hierarchy shared by every module.
//
// Two families: ConfigError (bad input, exit code 2 from the CLI) and
// NumericalError (a computation could not meet its contract, exit code 3).

#pragma once

#include <stdexcept>
#include <string>

namespace bbq {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// Truncation dimension below the allowed minimum.
class DimensionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Argument outside the domain of a closed-form function.
class DomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Frequency or flux outside the tunable range of a SQUID.
class RangeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Waveform grid too coarse to represent a pulse.
class ResolutionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

/// Dressed state could not be identified with its bare label.
class AmbiguousLabelingError : public NumericalError {
public:
    AmbiguousLabelingError(std::string label, double overlap)
        : NumericalError("ambiguous labeling for state " + label + ": best overlap " +
                         std::to_string(overlap) + " < 0.5"),
          label_(std::move(label)),
          overlap_(overlap) {}

    const std::string& label() const noexcept { return label_; }
    double overlap() const noexcept { return overlap_; }

private:
    std::string label_;
    double overlap_;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResonanceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IntegrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class CalibrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace bbq
