#pragma once

#include <string>
#include <vector>

#include "csltl/constraint.hpp"

namespace csltl {

// ── Conditional traces ───────────────────────────────────────────────────────
//
// A state is a conditional store <(eta+, eta-), store>, a stuttering step
// carrying a negative constraint set, or the end-of-process marker. A trace
// is a finite prefix optionally followed by a cycle that repeats forever
// (lasso shape). A trace with an empty cycle is finite; appending the End
// marker makes the termination explicit.

struct CondState {
    enum class Kind { Store, Stutt, End };

    Kind kind = Kind::Store;
    Constraint positive;               // Store: eta+
    std::vector<Constraint> negative;  // Store: eta-; Stutt: the constraint set
    Constraint store;                  // Store: accumulated information

    static CondState cond_store(Constraint positive, std::vector<Constraint> negative,
                                Constraint store) {
        CondState s;
        s.kind = Kind::Store;
        s.positive = std::move(positive);
        s.negative = std::move(negative);
        s.store = std::move(store);
        return s;
    }
    static CondState stutt(std::vector<Constraint> negative) {
        CondState s;
        s.kind = Kind::Stutt;
        s.negative = std::move(negative);
        return s;
    }
    static CondState end() {
        CondState s;
        s.kind = Kind::End;
        return s;
    }

    bool operator==(const CondState&) const = default;
};

struct ConditionalTrace {
    std::vector<CondState> prefix;
    std::vector<CondState> cycle;  // empty => finite trace

    bool is_lasso() const noexcept { return !cycle.empty(); }
    std::size_t period() const noexcept { return cycle.size(); }

    bool operator==(const ConditionalTrace&) const = default;

    std::string to_string() const;
};

// Stores never lose information: for cond-store states i <= j (the cycle wrap
// included), store_j entails store_i.
bool trace_is_monotone(const ConditionalTrace& trace, const ConstraintSystem& cs);

// No store entails any of its own negative conditions.
bool trace_is_consistent(const ConditionalTrace& trace, const ConstraintSystem& cs);

// Replace a trailing End marker by replicating the last store forever; a
// bare End becomes the all-true trace. Lasso-shaped inputs come back as is.
ConditionalTrace replicate_end(const ConditionalTrace& trace, const ConstraintSystem& cs);

}  // namespace csltl
