#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "csltl/formula.hpp"
#include "csltl/trace.hpp"

namespace csltl {

// ── Direct evaluation of the satisfaction relation ───────────────────────────
//
// Brute-force ground truth over ultimately periodic conditional traces, used
// to cross-check the tableau. Quantified formulas are rejected; the tableau
// removes top-level quantifiers before any comparison.

// trace |= f. End-terminated traces are first normalised by replicating the
// last store.
bool eval(const ConditionalTrace& trace, const Formula& f, const ConstraintSystem& cs);

// trace |= every member of the set.
bool eval_all(const ConditionalTrace& trace, const FormulaSet& formulas,
              const ConstraintSystem& cs);

// ── Bounded trace enumeration ────────────────────────────────────────────────

struct OracleBounds {
    std::size_t max_prefix = 4;
    std::size_t max_cycle = 3;
    std::size_t max_traces = 500000;  // explosion guard
};

// Every monotone consistent lasso whose stores are joins of subsets of
// `atoms`, with positive condition = store, empty negative sets, the cycle
// store constant, and false stores excluded (a state whose store is false
// satisfies every atom vacuously and corresponds to no computation).
// The visitor returns false to stop early.
void enumerate_traces(const ConstraintSystem& cs, const std::vector<Constraint>& atoms,
                      std::size_t max_prefix, std::size_t max_cycle,
                      std::size_t explosion_guard,
                      const std::function<bool(const ConditionalTrace&)>& visit);

std::vector<ConditionalTrace> enumerate_traces(const ConstraintSystem& cs,
                                               const std::vector<Constraint>& atoms,
                                               const OracleBounds& bounds = {});

// ── Bounded satisfiability search ────────────────────────────────────────────

struct OracleVerdict {
    std::optional<ConditionalTrace> witness;  // first satisfying trace

    bool found() const noexcept { return witness.has_value(); }
};

OracleVerdict oracle_sat(const FormulaSet& formulas, const ConstraintSystem& cs,
                         const std::vector<Constraint>& atoms,
                         const OracleBounds& bounds = {});

// Same search over a pre-enumerated trace list; lets a test suite reuse one
// enumeration across many formula sets.
OracleVerdict oracle_sat_over(const FormulaSet& formulas, const ConstraintSystem& cs,
                              const std::vector<ConditionalTrace>& traces);

// Positive-position quantifier stripping: E x. f under conjunctions is
// replaced by f, renaming x when it collides with the free variables of the
// rest of the set. This mirrors the equi-satisfiability of E x. f and f and
// makes top-level quantified sets oracle-checkable.
FormulaSet strip_positive_exists(const FormulaSet& formulas);

// The positive constraint atoms occurring in a formula (the store alphabet
// a bounded search needs).
std::vector<Constraint> collect_atoms(const FormulaSet& formulas);

}  // namespace csltl
