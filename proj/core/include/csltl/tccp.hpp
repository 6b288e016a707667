#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csltl/formula.hpp"
#include "csltl/tableau.hpp"

namespace csltl {

// ── Agents ───────────────────────────────────────────────────────────────────
//
//   A ::= skip | tell(c) | sum ask(c_i) -> A_i | now c then A else A
//       | A || A | exists x A | p(x...)
//
// Immutable shared trees, like formulas.

enum class AgentKind : std::uint8_t { Skip, Tell, Choice, Now, Par, Hide, Call };

class Agent {
public:
    struct Branch;  // guard/body pair of a choice

    Agent();  // skip

    static Agent skip();
    static Agent tell(Constraint c);
    static Agent choice(std::vector<Branch> branches);  // at least one branch
    static Agent now(Constraint cond, Agent then_agent, Agent else_agent);
    static Agent par(Agent lhs, Agent rhs);
    static Agent hide(Variable var, Agent body);
    static Agent call(std::string process, std::vector<Variable> args);

    AgentKind kind() const noexcept;
    const Constraint& constraint() const;            // Tell, Now
    const std::vector<Branch>& branches() const;     // Choice
    const Agent& first() const;                      // Now then / Par lhs / Hide body
    const Agent& second() const;                     // Now else / Par rhs
    const Variable& bound_var() const;               // Hide
    const std::string& process() const;              // Call
    const std::vector<Variable>& args() const;       // Call

    std::string to_string() const;

    struct Node;  // definition private to the implementation

private:
    explicit Agent(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Agent::Branch {
    Constraint guard;
    Agent body;
};

// ── Programs ─────────────────────────────────────────────────────────────────

struct Declaration {
    std::string name;
    std::vector<Variable> params;
    Agent body;
};

struct ProcessKey {
    std::string name;
    std::size_t arity = 0;

    auto operator<=>(const ProcessKey&) const = default;
    std::string to_string() const { return name + "/" + std::to_string(arity); }
};

// Declarations are closed with respect to parameter names: every process
// call resolves to a declaration with matching arity (checked at load).
class Program {
public:
    Program() = default;
    explicit Program(std::vector<Declaration> declarations);

    const std::vector<Declaration>& declarations() const noexcept { return decls_; }
    std::vector<ProcessKey> processes() const;
    // The formal parameters every body of the process is normalised to
    // (those of its first declaration).
    const std::vector<Variable>& canonical_params(const ProcessKey& key) const;
    bool empty() const noexcept { return decls_.empty(); }

private:
    std::vector<Declaration> decls_;
    std::map<ProcessKey, std::vector<Variable>> canonical_;
};

// ── Interpretations ──────────────────────────────────────────────────────────
//
// Process-call pattern -> formula: the specification of the expected
// behaviour, or the result of one semantics-evaluation round.

class Interpretation {
public:
    void define(ProcessKey key, std::vector<Variable> params, Formula formula);
    bool defines(const ProcessKey& key) const;

    // The formula for a call, arguments substituted positionally for the
    // stored formals.
    Formula lookup(const std::string& process, const std::vector<Variable>& args) const;

    struct Entry {
        std::vector<Variable> params;
        Formula formula;
    };
    const std::map<ProcessKey, Entry>& entries() const noexcept { return entries_; }

private:
    std::map<ProcessKey, Entry> entries_;
};

// ── Abstract semantics ───────────────────────────────────────────────────────

// Structural evaluation of an agent to a formula; process calls are looked
// up in the interpretation one time instant late.
Formula faa(const Agent& agent, const Interpretation& interp);

// Per-process disjunction of faa over all declared bodies.
Interpretation fdd(const Program& program, const Interpretation& interp);

// ── Diagnosis ────────────────────────────────────────────────────────────────

enum class ProcessVerdict : std::uint8_t {
    Correct,  // the behaviour implication is valid
    Warning,  // open tableau: possible incorrectness only, the abstraction
              // over-approximates
};

struct DiagnosisResult {
    ProcessKey process;
    ProcessVerdict verdict = ProcessVerdict::Correct;
    Formula checked;                            // fdd -> spec implication
    std::optional<ConditionalTrace> countermodel;
    Tableau tableau;
};

// For each process p: Correct iff fdd(P,S)(p) -> S(p) is valid. The
// specification must be quantifier free.
std::vector<DiagnosisResult> diagnose(const Program& program, const Interpretation& spec,
                                      const ConstraintSystem& cs,
                                      const TableauOptions& opts = {});

// Heuristic reverse check, valid(S(p) -> fdd(P,S)(p)), with the positive
// quantifiers of fdd stripped first (the tableau has no rule for a negated
// quantifier). A `true` result means no uncovered behaviour was detected by
// the heuristic; it asserts nothing stronger.
struct UncoveredHint {
    ProcessKey process;
    bool no_uncovered_detected = false;
};

std::vector<UncoveredHint> uncovered_hint(const Program& program,
                                          const Interpretation& spec,
                                          const ConstraintSystem& cs,
                                          const TableauOptions& opts = {});

}  // namespace csltl
