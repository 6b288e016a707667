#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "csltl/constraint.hpp"

namespace csltl {

// ── Formula ──────────────────────────────────────────────────────────────────
//
// Core temporal syntax over constraint atoms:
//
//   f ::= true | false | c | ~f | (f & f) | E x. f | X f | (f U f)
//
// Derived operators (|, ->, F, G, W) exist only as constructors that expand
// to the core forms. Formulas are immutable shared values; structural
// equality and a deterministic total order are the notions used everywhere
// (label comparison, canonical set order, cycle detection).
//
// Negation comes in two flavours:
//   negate()  - the public constructor; collapses double negations, so
//               ~G f built through it is syntactically an Until formula.
//   raw_not() - the literal wrap used when instantiating tableau rule
//               patterns, whose outputs keep ~~f for a later R1 step.

enum class FormulaKind : std::uint8_t {
    True,
    False,
    Atom,
    Not,
    And,
    Exists,
    Next,
    Until,
};

class Formula {
public:
    Formula();  // the constant true

    static Formula truth();
    static Formula falsity();
    static Formula atom(Constraint c);
    static Formula negate(Formula f);
    static Formula raw_not(Formula f);
    static Formula conj(Formula lhs, Formula rhs);  // true is a unit: (f & true) = f
    static Formula exists(Variable var, Formula body);
    static Formula next(Formula f);
    static Formula until(Formula lhs, Formula rhs);

    // Derived forms.
    static Formula disj(Formula lhs, Formula rhs);      // ~(~a & ~b)
    static Formula implies(Formula lhs, Formula rhs);   // ~a | b
    static Formula eventually(Formula f);               // true U f
    static Formula always(Formula f);                   // ~(true U ~f), literally
    static Formula weak_until(Formula lhs, Formula rhs);

    FormulaKind kind() const noexcept;
    const Constraint& atom_constraint() const;
    const Variable& bound_var() const;   // Exists
    const Formula& child() const;        // Not, Next, Exists
    const Formula& lhs() const;          // And, Until
    const Formula& rhs() const;          // And, Until

    std::size_t hash() const noexcept;
    bool operator==(const Formula& other) const noexcept;
    bool operator!=(const Formula& other) const noexcept { return !(*this == other); }
    std::strong_ordering operator<=>(const Formula& other) const noexcept;

    std::string to_string() const;

    struct Node;  // definition private to the implementation

private:
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

// ── Classification ───────────────────────────────────────────────────────────

enum class FormulaClass {
    TrueFalse,          // true, false
    ConstraintFormula,  // c, ~c (and ~true / ~false)
    NextFormula,        // X f, ~X f
    AlphaFormula,       // ~~f, f & g
    BetaFormula,        // ~(f & g), ~(f U g), f U g
    ExistsFormula,      // E x. f
};

// Total on core syntax except ~E x. f, which raises UnsupportedNegatedExists.
FormulaClass classify(const Formula& f);

// Until formulas; by construction ~G f is one of them.
bool is_eventuality(const Formula& f);

bool is_constraint_formula(const Formula& f);
bool is_elementary(const Formula& f);  // constraint or next formula

// The constraint of a constraint formula, with its sign. true/false map to
// the constraint constants of `cs`.
struct SignedAtom {
    bool positive;
    Constraint constraint;
};
SignedAtom constraint_of(const Formula& f, const ConstraintSystem& cs);

// ── Variable hygiene ─────────────────────────────────────────────────────────

std::set<Variable> free_vars(const Formula& f);
std::set<Variable> all_vars(const Formula& f);  // free and bound, plus binders

// Capture-avoiding substitution of free occurrences of `from` by `to`.
// Requires `to` neither free nor bound in f.
Formula rename_free(const Formula& f, const Variable& from, const Variable& to);

// ── FormulaSet ───────────────────────────────────────────────────────────────
//
// Canonically ordered, duplicate-free. Equality is decidable and is the
// label-equality notion used for cycle detection.

class FormulaSet {
public:
    FormulaSet() = default;
    FormulaSet(std::initializer_list<Formula> init);

    bool insert(Formula f);            // false if already present
    bool erase(const Formula& f);      // false if absent
    bool contains(const Formula& f) const;

    FormulaSet with(Formula f) const;
    FormulaSet without(const Formula& f) const;

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    auto begin() const noexcept { return items_.begin(); }
    auto end() const noexcept { return items_.end(); }

    bool operator==(const FormulaSet& other) const;
    std::strong_ordering operator<=>(const FormulaSet& other) const;

    std::string to_string() const;

private:
    std::vector<Formula> items_;  // sorted, unique
};

}  // namespace csltl
