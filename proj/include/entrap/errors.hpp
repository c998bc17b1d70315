#pragma once

#include <stdexcept>
#include <string>

namespace entrap {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A model violates a structural invariant (bad probabilities, missing
/// actions, out-of-range indices, ...). The message names the first
/// offending state/action pair.
struct ModelError : Error {
    using Error::Error;
    ModelError(const std::string& what, int state, int action = -1)
        : Error(what + " (state " + std::to_string(state) +
                (action >= 0 ? ", action " + std::to_string(action) : std::string{}) + ")"),
          state_index(state), action_index(action) {}
    int state_index = -1;
    int action_index = -1;
};

/// A stochastic policy is inconsistent with the model it is paired with.
struct PolicyError : Error {
    using Error::Error;
};

/// An iterative solver hit its iteration cap before reaching its target.
struct ConvergenceError : Error {
    ConvergenceError(double residual, int iterations)
        : Error("solver did not converge: residual " + std::to_string(residual) +
                " after " + std::to_string(iterations) + " iterations"),
          residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

/// Invalid generator parameters or an infeasible generated layout.
struct DomainError : Error {
    using Error::Error;
};

/// A generator or compiler would exceed its configured state-space limit.
struct StateSpaceError : Error {
    using Error::Error;
};

/// A policy file does not match the instance it is being applied to.
struct FingerprintError : Error {
    using Error::Error;
};

/// Bad experiment configuration (unknown key, out-of-range value, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// File could not be read, written, or parsed.
struct IoError : Error {
    using Error::Error;
};

/// Undiscounted step-count planning was requested but some state cannot
/// reach any trap.
struct NoTrapReachableError : Error {
    using Error::Error;
};

}  // namespace entrap
