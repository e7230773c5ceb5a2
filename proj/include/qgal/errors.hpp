#pragma once

#include <stdexcept>
#include <string>

namespace qgal {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two elements (or an element and a functional) built over different bases.
struct DescriptorMismatch : Error {
    using Error::Error;
};

// A basic hypergeometric series with |z| >= 1 that does not terminate.
struct NonTerminatingDivergent : Error {
    using Error::Error;
};

struct NotAbelian : Error {
    using Error::Error;
};

struct DegenerateCocycle : Error {
    using Error::Error;
};

// Tail bound of a truncated coproduct series exceeds the requested tolerance.
struct SeriesOrderTooSmall : Error {
    using Error::Error;
};

// A pairing landed between the noise floor and the signal threshold.
struct AmbiguousDetection : Error {
    using Error::Error;
};

struct ValidationFailure : Error {
    using Error::Error;
};

struct NonUnitaryResidual : Error {
    using Error::Error;
};

// The unitary implementing a coaction could not be assembled from it.
struct ImplementationFailure : Error {
    using Error::Error;
};

struct NoInvertibleElement : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace qgal
