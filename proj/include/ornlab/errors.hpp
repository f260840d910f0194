#pragma once

#include <stdexcept>
#include <string>

namespace ornlab {

/// Base class for all ornlab errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Linear solve against a dependent basis (signals a broken constellation).
struct SingularBasis : Error {
    using Error::Error;
};

/// Node index outside [0, p^g).
struct IndexOutOfRange : Error {
    using Error::Error;
};

/// Timestep decomposition outside [0, T).
struct OutOfPeriod : Error {
    using Error::Error;
};

/// Virtual-topology edge stream asked for more than the configured window cap.
struct WindowTooLarge : Error {
    using Error::Error;
};

/// Design parameters outside what a schedule family supports (e.g. SORN with g = 1).
struct UnsupportedDesign : Error {
    using Error::Error;
};

/// No valid two-hop intermediate node exists (p too small).
struct NoIntermediate : Error {
    using Error::Error;
};

/// 1/r is an integer, so the slack parameter degenerates.
struct EpsilonOne : Error {
    using Error::Error;
};

/// A stated prime lower bound is violated; the message names each violated inequality.
struct PrimeTooSmall : Error {
    using Error::Error;
};

/// Bilinear tail experiment asked to run on a spec violating its norm-ratio hypothesis.
struct HypothesisViolated : Error {
    using Error::Error;
};

/// The two test functions of a covariance query touch overlapping index sets.
struct IndexOverlap : Error {
    using Error::Error;
};

/// A supplied function spec is not monotone as required (e.g. mixed directions).
struct NotMonotone : Error {
    using Error::Error;
};

/// Submatrix sample with K > N/2.
struct KTooLarge : Error {
    using Error::Error;
};

}  // namespace ornlab
