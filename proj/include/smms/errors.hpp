#pragma once

#include <stdexcept>
#include <string>

namespace smms {

// Argument outside the mathematical domain of an operation (x <= 0 for
// log_gamma, m = infinity where only finite m is defined, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A stated precondition on the inputs does not hold (misaligned fields,
// non-normalized fields, mismatched spaces).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An iterative method stopped before meeting its tolerance.
class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two routes to the same quantity disagree beyond tolerance; indicates a
// grid misconfiguration or a bug rather than bad user input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace smms
