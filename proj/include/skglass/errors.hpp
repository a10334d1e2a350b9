#pragma once

#include <stdexcept>

namespace skglass {

/// Request exceeds a hard enumeration or materialization cap (2^n cost).
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incremental energy drifted past the abort threshold during a sweep.
/// Indicates broken couplings (non-finite entries) or an implementation bug.
class EnumerationDriftError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace skglass
