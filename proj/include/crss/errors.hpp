#pragma once

#include <stdexcept>
#include <string>

namespace crss {

// Base class for all typed failures raised by the library.  Every throw site
// uses one of the derived types below so callers can react to the specific
// failure mode rather than parsing message strings.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested at (or numerically too close to) the Cayley pole.
struct PoleSingularity : Error { using Error::Error; };

// A two-point kernel was evaluated on (or too close to) its diagonal.
struct SingularDiagonal : Error { using Error::Error; };

// An argument left the mathematical domain of the operation
// (parameter out of range, point off the sphere, non-positive input to a
// power/log map, and similar).
struct DomainViolation : Error { using Error::Error; };

// Orthogonalization produced fewer independent functions than the known
// subspace dimension.
struct RankDeficiency : Error { using Error::Error; };

// An inverse multiplier was applied to a function with energy on a kernel
// mode while strict handling was requested.
struct KernelModePresent : Error { using Error::Error; };

// Input to a pluriharmonic-only functional has non-negligible energy outside
// the pluriharmonic modes.
struct NotPluriharmonic : Error { using Error::Error; };

// Input violates a documented normalization precondition.
struct NotNormalized : Error { using Error::Error; };

// Input function is numerically zero where a nonzero function is required.
struct ZeroFunction : Error { using Error::Error; };

// Input function is negative where nonnegativity is required.
struct NegativeFunction : Error { using Error::Error; };

// A denominator in a ratio-type functional fell below its guard threshold.
struct DegenerateDenominator : Error { using Error::Error; };

// An iterative search exhausted its budget without meeting its certificate.
struct NonConvergence : Error { using Error::Error; };

// Generic precondition violation that has no more specific type above.
struct PreconditionViolation : Error { using Error::Error; };

// A size/resource guard tripped (e.g. a grid request beyond the supported
// band limit).
struct ResourceLimit : Error { using Error::Error; };

// File or serialization failure.
struct IoError : Error { using Error::Error; };

}  // namespace crss
