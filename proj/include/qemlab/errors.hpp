#pragma once

#include <stdexcept>
#include <string>

namespace qemlab {

// Base class for every error thrown by the engine.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Point outside the chart's sample domain.
struct DomainError : Error { using Error::Error; };

// Non-finite value showed up in an evaluation.
struct NumericError : Error { using Error::Error; };

// Metric failed the positive-definiteness check.
struct MetricSignatureError : Error { using Error::Error; };

// Operation needs a higher dimension than the input has.
struct DimensionError : Error { using Error::Error; };

// Mismatched tensor shapes or variances.
struct ShapeError : Error { using Error::Error; };

// Invalid parameters passed to a builder or the CLI.
struct ParamError : Error { using Error::Error; };

// Two routes that must agree did not; indicates a kernel bug.
struct InconsistencyError : Error { using Error::Error; };

} // namespace qemlab
