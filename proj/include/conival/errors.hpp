#pragma once

#include <stdexcept>
#include <string>

namespace conival {

// Error taxonomy shared by all modules.  The CLI maps these to exit codes:
// parse errors -> 64, precision/budget -> 3, constraint violations -> 2.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct PrecisionExhausted : Error {
    explicit PrecisionExhausted(const std::string& msg) : Error("precision exhausted: " + msg) {}
};

struct NegativeValue : Error {
    explicit NegativeValue(const std::string& msg) : Error("negative valuation: " + msg) {}
};

struct NotInvertible : Error {
    explicit NotInvertible(const std::string& msg) : Error("not invertible: " + msg) {}
};

struct PreconditionViolated : Error {
    explicit PreconditionViolated(const std::string& msg) : Error("precondition violated: " + msg) {}
};

struct NotPIndependent : Error {
    explicit NotPIndependent(const std::string& msg) : Error("generators not 2-independent: " + msg) {}
};

struct DegreeBudgetExceeded : Error {
    explicit DegreeBudgetExceeded(const std::string& msg) : Error("degree budget exceeded: " + msg) {}
};

struct TraceNotOne : Error {
    explicit TraceNotOne(const std::string& msg) : Error("trace not one: " + msg) {}
};

struct HomomorphismCheckFailed : Error {
    explicit HomomorphismCheckFailed(const std::string& msg) : Error("homomorphism check failed: " + msg) {}
};

struct NoLatticeBasis : Error {
    explicit NoLatticeBasis(const std::string& msg) : Error("no lattice basis attached: " + msg) {}
};

struct ConstraintViolation : Error {
    explicit ConstraintViolation(const std::string& msg) : Error("constraint violation: " + msg) {}
};

struct IsotropicResult : Error {
    explicit IsotropicResult(const std::string& msg) : Error("construction is isotropic: " + msg) {}
};

struct ResidueDecisionUnknown : Error {
    explicit ResidueDecisionUnknown(const std::string& msg) : Error("residue-field decision exceeded budget: " + msg) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

struct Unsupported : Error {
    explicit Unsupported(const std::string& msg) : Error("unsupported: " + msg) {}
};

struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error("internal error: " + msg) {}
};

} // namespace conival
