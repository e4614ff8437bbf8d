#pragma once

#include <stdexcept>
#include <string>

namespace smps {

/// Bad argument (out-of-range cut, empty subset, invalid distribution).
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense object would exceed the configured size guard.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

/// Matrix shapes do not chain, or an entry is negative.
struct StructuralError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input violates an operation's precondition (e.g. unnormalized MPS).
struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

/// All probability mass was pruned away.
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Candidate representations describe different distributions.
struct InconsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linear solver failed to reach its residual target.
struct NumericalError : std::runtime_error {
    double residual;
    NumericalError(const std::string &what, double residual_) : std::runtime_error(what), residual(residual_) {}
};

} // namespace smps
