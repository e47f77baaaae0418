#pragma once

#include <stdexcept>
#include <string>

namespace fg {

// All recoverable failures derive from Error so that the CLI and the
// verification drivers can translate them into report statuses.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NonEisensteinPolynomial : Error {
    using Error::Error;
};
struct PrecisionBudgetTooSmall : Error {
    using Error::Error;
};
struct NotDivisible : Error {
    using Error::Error;
};
struct PrecisionExhausted : Error {
    using Error::Error;
};
// Raised when an element vanishes at its known precision but a definite
// nonzero value (or a finite valuation) is required.
struct PrecisionHorizon : Error {
    using Error::Error;
};
struct DomainMismatch : Error {
    using Error::Error;
};
struct BaseMismatch : Error {
    using Error::Error;
};
struct NonClosedTable : Error {
    using Error::Error;
};
struct RelationInconsistent : Error {
    using Error::Error;
};
struct NotIdempotent : Error {
    using Error::Error;
};
struct ConstantTermNotComposable : Error {
    using Error::Error;
};
struct LinearCoefficientNotUnit : Error {
    using Error::Error;
};
struct NotLacunary : Error {
    using Error::Error;
};
struct MembershipUncertifiable : Error {
    using Error::Error;
};
struct FrobeniusConditionUnverified : Error {
    using Error::Error;
};
struct InvalidConfig : Error {
    using Error::Error;
};

}  // namespace fg
