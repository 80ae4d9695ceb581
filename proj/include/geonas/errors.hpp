#pragma once

#include <stdexcept>
#include <string>

namespace geonas {

/// Shape or length mismatch between tensors/vectors.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid construction parameters (even kernel size, bad hyperparameters, bad config file).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A raw value fell outside its declared range; `variable` names the offender.
struct RangeError : std::runtime_error {
    std::string variable;
    RangeError(std::string var, const std::string& msg)
        : std::runtime_error(msg), variable(std::move(var)) {}
};

/// Ratio-measurement denominator collapsed below the guard threshold.
struct DegenerateFieldError : std::runtime_error {
    explicit DegenerateFieldError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Kernel Gram matrix could not be factored even after jitter escalation.
struct SingularKernelError : std::runtime_error {
    explicit SingularKernelError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Training produced a non-finite loss; carries the epoch where it happened.
struct TrainingDivergedError : std::runtime_error {
    int epoch;
    TrainingDivergedError(int at_epoch, const std::string& msg)
        : std::runtime_error(msg), epoch(at_epoch) {}
};

/// Operation invoked out of order (e.g. inverse phase before the forward phase).
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace geonas
