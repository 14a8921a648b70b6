#pragma once

#include <stdexcept>
#include <string>

namespace bdkit {

// Base class for numeric/runtime failures of the toolkit. Parameter
// validation errors use std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Partial sums of the stationary-weight series grow without the stopping
// rule triggering (non-positive-recurrent regenerative process).
class DivergentSeries : public Error {
public:
    using Error::Error;
};

// An operation defined only for subcritical input was called with
// lambda >= 1 (mean duration / total progeny are infinite there).
class SupercriticalInput : public Error {
public:
    using Error::Error;
};

// An operation defined only for supercritical input was called with
// lambda <= 1.
class SubcriticalInput : public Error {
public:
    using Error::Error;
};

// Fixed-point iteration exhausted its budget (typically lambda near 1).
class NonConvergence : public Error {
public:
    using Error::Error;
};

// A root bracket did not change sign; signals degenerate rates or a bug.
class BracketFailure : public Error {
public:
    using Error::Error;
};

// A replicate hit the event-count safety limit.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

// A z-test was requested against a zero-variance estimate that does not
// already equal the target.
class DegenerateEstimate : public Error {
public:
    using Error::Error;
};

}  // namespace bdkit
