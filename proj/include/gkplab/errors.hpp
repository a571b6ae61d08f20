#pragma once

#include <stdexcept>
#include <string>

namespace gkp {

/// Violated precondition or malformed argument (dimension mismatch, bad index,
/// out-of-range parameter). Maps to CLI exit code 1.
struct ContractViolation : std::invalid_argument {
    explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Conditioning on a variable whose variance is zero (or exactly singular in
/// the exact-arithmetic path).
struct DegenerateConditioning : std::runtime_error {
    explicit DegenerateConditioning(const std::string& what) : std::runtime_error(what) {}
};

/// Envelope parameters violate the physicality bound (delta*kappa >= 1).
struct UnphysicalEnvelope : std::runtime_error {
    explicit UnphysicalEnvelope(const std::string& what) : std::runtime_error(what) {}
};

/// Request exceeds a hard capacity limit (e.g. grid oracle beyond 3 modes).
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A grid operation moved significant amplitude off the grid extent.
struct AliasingError : std::runtime_error {
    explicit AliasingError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal cross-check between two layers of the simulator disagreed.
struct InternalConsistencyError : std::runtime_error {
    explicit InternalConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gkp
