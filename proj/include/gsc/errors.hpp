#pragma once

#include <stdexcept>
#include <string>

namespace gsc {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// vee() applied to a matrix that is not skew-symmetric within tolerance.
struct NonSkew : Error {
    using Error::Error;
};

/// A quantity left the domain required by the operation (e.g. psi above cap).
struct DomainViolation : Error {
    using Error::Error;
};

/// Inertia matrix is not invertible.
struct SingularInertia : Error {
    using Error::Error;
};

/// A state component exceeded the divergence guard during integration.
struct NumericalBlowup : Error {
    using Error::Error;
};

/// The required thrust direction is undefined (near-zero force demand).
struct DegenerateThrustDirection : Error {
    using Error::Error;
};

/// Commanded heading is parallel to the thrust axis.
struct HeadingParallel : Error {
    using Error::Error;
};

/// Rotor thrust outside the open barrier interval (f_min, f_max).
struct OutOfBarrierDomain : Error {
    using Error::Error;
};

/// Attitude-error cap outside (0, 2).
struct InvalidPsiCap : Error {
    using Error::Error;
};

/// Basin variant needs an error bound that was not supplied.
struct InvalidVariant : Error {
    using Error::Error;
};

/// Polynomial boundary-value system too ill-conditioned to solve.
struct IllConditioned : Error {
    using Error::Error;
};

/// Scenario configuration is invalid or unreadable.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace gsc
