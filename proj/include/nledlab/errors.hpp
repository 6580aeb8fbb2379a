#pragma once

#include <stdexcept>
#include <string>

namespace nledlab {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (degree mismatch,
/// non-normalized 4-velocity, bad argument ranges).
struct ContractViolation : Error {
    using Error::Error;
};

/// Field strength left the Born-Infeld domain: Delta(X,Y) dropped to or
/// below the configured floor. Signals unphysical input or a solver blow-up.
struct FieldBoundExceeded : Error {
    using Error::Error;
};

/// An iterative numerical procedure failed to converge or was handed a
/// degenerate problem (e.g. a phase-speed fit on a static solution).
struct NumericalFailure : Error {
    using Error::Error;
};

/// Thermodynamically inconsistent fluid state.
struct InvalidState : Error {
    using Error::Error;
};

/// rho + p = 0: the fluid element has no inertia to accelerate.
struct DegenerateInertia : Error {
    using Error::Error;
};

/// Invalid or inconsistent run configuration (CLI layer, exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace nledlab
