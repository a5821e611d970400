#ifndef KEYFORGE_ERRORS_HPP
#define KEYFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace keyforge {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Precondition violation on a domain value (wrong degree, zero argument, ...).
struct DomainError : Error { using Error::Error; };
// Operands belong to different groups / fields / descriptors.
struct DescriptorError : Error { using Error::Error; };
// augment() called with a polynomial that is not an MLV key.
struct KeyRequired : Error { using Error::Error; };
// augment() called with gamma <= nu(phi).
struct MonotonicityViolation : Error { using Error::Error; };
// phi_class() on chains that are not nested.
struct NotComparable : Error { using Error::Error; };
// residue_of_unit() arguments with different values.
struct NotDegreeZero : Error { using Error::Error; };
// initial-term ratio is not a unit of the graded algebra.
struct NotAUnit : Error { using Error::Error; };
// residual normalizer missing or with the wrong value.
struct BadNormalizer : Error { using Error::Error; };
// boundedness classification refused (finite data cannot decide).
struct NotClassifiable : Error { using Error::Error; };
// generator rule or stabilization budget exhausted.
struct BudgetExceeded : Error { using Error::Error; };
// chain_invariants() on a stable or too-small polynomial.
struct NotALimitCandidate : Error { using Error::Error; };
// residue machinery unavailable over this base (infinite residue field,
// or an incommensurable value in the chain).
struct ResidualUnavailable : Error { using Error::Error; };

} // namespace keyforge

#endif
