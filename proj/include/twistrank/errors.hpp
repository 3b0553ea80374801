#pragma once

#include <stdexcept>

namespace twistrank {

/// Failures of the computation itself, as opposed to bad arguments.
/// The CLI maps these to exit code 3.
struct ComputationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trial division hit its bound and left a composite cofactor.
struct IncompleteFactorization : ComputationError {
    using ComputationError::ComputationError;
};

/// The analytic class number did not settle near an integer even at the
/// highest working precision.
struct PrecisionError : ComputationError {
    using ComputationError::ComputationError;
};

/// Malformed cache file or schema mismatch.
struct CacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace twistrank
