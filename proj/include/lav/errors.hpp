#ifndef LAV_ERRORS_HPP
#define LAV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lav {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or out-of-contract arguments.
struct DomainError : Error {
    using Error::Error;
};

// Malformed textual input (serializations, CLI expressions, config files).
struct ParseError : Error {
    using Error::Error;
};

// An operation needed more p-adic precision than the operand carries.
struct InsufficientPrecision : Error {
    using Error::Error;
};

// A series operation would need terms beyond the known-modulo-X^B cap.
struct CapExhausted : Error {
    using Error::Error;
};

// No unit leading monomial (or no cap margin) to invert against.
struct NotInvertible : Error {
    using Error::Error;
};

// A tail bound too weak to certify the requested quantity.
struct TailUnbounded : Error {
    using Error::Error;
};

// Measured contraction gain does not exceed the required growth rate.
struct GainTooSmall : Error {
    using Error::Error;
};

// Triangular solve could not make progress before its iteration budget.
struct SolveStalled : Error {
    using Error::Error;
};

// A configured work bound (degree, level, grid) was exhausted.
struct BudgetExceeded : Error {
    using Error::Error;
};

struct Unsupported : Error {
    using Error::Error;
};

} // namespace lav

#endif
