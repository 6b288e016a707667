#pragma once

#include <set>
#include <utility>

#include "csltl/formula.hpp"

namespace csltl {

// ── Stream dependencies ──────────────────────────────────────────────────────
//
// A pair (S, S') records that S' is the tail of S somewhere in the formula.
// Tails are unique: a stream name may appear at most once as a second
// component.

struct StreamDeps {
    std::set<std::pair<Variable, Variable>> pairs;

    bool operator==(const StreamDeps&) const = default;
};

// Collect the dependencies of every S=[c|S'] atom. Negation is traversed
// like the next and hiding cases. Raises DuplicateTail when two streams
// share a tail.
StreamDeps dep(const Formula& f);

// The first name given to the stream: walk the tail links backwards to the
// unique source. head(S, {}) = S. Raises DependencyCycle on circular
// dependencies.
Variable head(const Variable& stream, const StreamDeps& deps);

// The satisfiability-preserving simplification: every S'=[c|S''] becomes
// head(S') ~= c, every other constructor is mapped homomorphically. The
// dependency set is computed once over the whole input formula.
Formula simplify(const Formula& f);

}  // namespace csltl
