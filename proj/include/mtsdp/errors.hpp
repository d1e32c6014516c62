#pragma once

#include <stdexcept>
#include <string>

namespace mtsdp {

// Failure taxonomy for the solver stack. Everything derives from Error so
// callers can catch the whole family at the driver boundary.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Matrix left the PSD cone beyond the clamp band.
struct NotPositiveSemidefinite : Error {
    using Error::Error;
};

// Operator (Lyapunov, scaling construction) requires a strictly PD argument.
struct NotPositiveDefinite : Error {
    using Error::Error;
};

// An iterate violates G(x), Y strictly positive definite.
struct NotInterior : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

// Newton system factorization breakdown or reciprocal condition < 1e-13.
struct SingularSystem : Error {
    using Error::Error;
};

// Fraction-to-boundary search exceeded the backtrack budget.
struct BacktrackExhausted : Error {
    using Error::Error;
};

// Solver constants violate the admissibility inequalities.
struct ConfigError : Error {
    using Error::Error;
};

// Eigenvalues of G(x*) too close to the rank cutoff to decide r*.
struct RankAmbiguous : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

// Corrector Newton iteration did not reach tolerance.
struct NoConvergence : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct UnknownInstance : Error {
    using Error::Error;
};

}  // namespace mtsdp
