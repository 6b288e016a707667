#pragma once

#include <stdexcept>
#include <string>

namespace csltl {

// Every failure the engine can signal. Each value maps onto exactly one
// contract violation of the public API.
enum class ErrorKind {
    ForeignConstraint,           // constraint token used with a system that does not own it
    ClosureViolation,            // finite table breaks a lattice law
    MalformedSystem,             // structural problem in a system description
    UnknownAtom,                 // atom name not declared in the active system
    Parse,                       // concrete-syntax error (carries line/column)
    Capture,                     // rename_free precondition violated
    NonFreshVariable,            // exists-elimination given a variable already in use
    UnsupportedNegatedExists,    // classify() on ~E x. f
    NotAlpha,                    // apply_alpha on a non-alpha formula
    NotBeta,                     // apply_beta on a non-beta formula
    ContextOnNondistinguished,   // R6 requested while another eventuality is marked
    NonElementaryLabel,          // next operator on a label with pending rule work
    BranchNotOpen,               // model extraction from a branch that is not open
    BudgetExceeded,              // tableau node budget hit
    DuplicateTail,               // one stream name used as the tail of two streams
    DependencyCycle,             // stream dependency pairs form a loop
    UnresolvedCall,              // process call with no matching declaration
    ArityMismatch,               // process call arity differs from declaration
    UnboundProcess,              // interpretation lookup for an unknown process
    SpecUsesExists,              // specification formula contains a quantifier
    ExistsUnsupported,           // oracle eval on a quantified formula
    ExplosionGuard,              // trace enumeration above the configured cap
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Syntax error with source position (1-based line/column).
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message)
        : Error(ErrorKind::Parse,
                "parse error at " + std::to_string(line) + ":" +
                    std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace csltl
