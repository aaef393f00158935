#pragma once

#include <stdexcept>
#include <string>

namespace maxvol {

/// Base class for all errors raised by the library.
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Inputs outside the mathematical domain of an operation
/// (mismatched curvature, triangle-inequality violation, ...).
struct DomainError : GeometryError {
    using GeometryError::GeometryError;
};

/// Degenerate configuration (coincident points, zero-length sides).
struct DegeneracyError : GeometryError {
    using GeometryError::GeometryError;
};

/// The requested object is not unique (antipodal log on the sphere).
struct AmbiguityError : GeometryError {
    using GeometryError::GeometryError;
};

/// An iterative solver failed to reach its tolerance. Carries the best
/// value found so callers can decide whether to use it anyway.
struct NumericalError : GeometryError {
    double best_value;
    NumericalError(const std::string& what, double best)
        : GeometryError(what), best_value(best) {}
};

/// A discretization was too coarse to answer the query.
struct ResolutionError : GeometryError {
    using GeometryError::GeometryError;
};

/// A scan could not assemble its prerequisites (e.g. no strainer found).
struct SetupError : GeometryError {
    using GeometryError::GeometryError;
};

/// Configuration file problems; maps to CLI exit code 2.
struct ConfigError : GeometryError {
    using GeometryError::GeometryError;
};

} // namespace maxvol
