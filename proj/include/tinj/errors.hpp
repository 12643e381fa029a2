#pragma once

#include <stdexcept>
#include <string>

namespace tinj {

/// Requested size exceeds an exact-mode guard (state vectors, enumeration).
struct TooLargeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Both logical amplitudes evaluate to zero: the trajectory cannot occur
/// at this rotation.
struct ZeroStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No basis string satisfies the requested Z-sector parities.
struct InconsistentTrajectoryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Projector chain annihilated the state (probability below threshold).
struct ImpossibleTrajectoryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A search produced no candidate under the residual threshold.
struct EmptyResultError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Post-selection table requested from an empty statistics list.
struct EmptyStatsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Operation does not support this layout variant.
struct UnsupportedLayoutError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tinj
