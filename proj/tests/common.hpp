#pragma once

// Shared fixtures and generators for the test suites.

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "csltl/constraint.hpp"
#include "csltl/formula.hpp"
#include "csltl/oracle.hpp"

namespace csltl::testing {

inline const FlatSystem& flat() {
    static FlatSystem system;
    return system;
}

// Four atoms in a total order: false above a above b above true.
inline std::shared_ptr<const FiniteTableSystem> chain4() {
    return build_finite_system({"true", "false", "a", "b"}, {{"a", "b"}}, {});
}

// Diamond: p and q incomparable with join pq.
inline std::shared_ptr<const FiniteTableSystem> diamond() {
    return build_finite_system({"true", "false", "p", "q", "pq"},
                               {{"pq", "p"}, {"pq", "q"}},
                               {{{"p", "q"}, "pq"}});
}

// ── Shorthand builders over the flat system ──────────────────────────────────

inline Formula feq(const std::string& var, const std::string& value) {
    return Formula::atom(flat().eq(Variable{var}, value));
}

inline Formula fprop(const std::string& name) {
    return Formula::atom(flat().prop(name));
}

inline Formula fcur(const std::string& stream, const std::string& value) {
    return Formula::atom(flat().stream_cur(Variable{stream}, value));
}

inline Formula fcons(const std::string& stream, const std::string& value,
                     const std::string& tail) {
    return Formula::atom(flat().stream_cons(Variable{stream}, value, Variable{tail}));
}

// ── Random formulas over a fixed atom alphabet ───────────────────────────────

struct FormulaGen {
    std::mt19937 rng;
    std::vector<Constraint> atoms;
    int max_depth = 3;

    FormulaGen(std::uint32_t seed, std::vector<Constraint> alphabet, int depth)
        : rng(seed), atoms(std::move(alphabet)), max_depth(depth) {}

    Formula atom() {
        std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
        return Formula::atom(atoms[pick(rng)]);
    }

    // Quantifier-free formula with bounded connective depth.
    Formula operator()(int depth_left = -1) {
        if (depth_left < 0) depth_left = max_depth;
        std::uniform_int_distribution<int> pick(0, depth_left == 0 ? 2 : 8);
        switch (pick(rng)) {
            case 0:
            case 1:
                return atom();
            case 2:
                return Formula::negate(atom());
            case 3:
                return Formula::truth();
            case 4:
                return Formula::negate((*this)(depth_left - 1));
            case 5:
                return Formula::conj((*this)(depth_left - 1), (*this)(depth_left - 1));
            case 6:
                return Formula::next((*this)(depth_left - 1));
            case 7:
                return Formula::until((*this)(depth_left - 1), (*this)(depth_left - 1));
            default:
                return Formula::disj((*this)(depth_left - 1), (*this)(depth_left - 1));
        }
    }
};

}  // namespace csltl::testing
