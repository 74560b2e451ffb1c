#pragma once

#include <stdexcept>
#include <string>

namespace rctk {

// Adaptive scheme failed to reach the requested tolerance.
struct NonConvergentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integral does not converge (integrand does not decay fast enough).
struct DivergentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Conditionally convergent integral requested without the principal-value flag.
struct NeedsPrincipalValueError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transform evaluated exactly at a rigid-cutoff endpoint, where the
// arctanh-type denominators diverge. Callers should offset their grids.
struct EndpointSingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownFamilyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownLabelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonUniqueSteadyStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotRelaxingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Steady state with min eigenvalue below the PSD tolerance; reported, not clipped.
struct PositivityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user input (config file, CLI argument, density file).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace rctk
