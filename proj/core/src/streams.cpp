#include "csltl/streams.hpp"

#include <map>

namespace csltl {

namespace {

void collect_deps(const Formula& f, StreamDeps& out) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return;
        case FormulaKind::Atom:
            for (const FlatFact& fact : f.atom_constraint().facts()) {
                if (fact.kind == FactKind::StreamCons) {
                    out.pairs.emplace(fact.var, fact.tail);
                }
            }
            return;
        case FormulaKind::Not:
        case FormulaKind::Next:
        case FormulaKind::Exists:
            collect_deps(f.child(), out);
            return;
        case FormulaKind::And:
        case FormulaKind::Until:
            collect_deps(f.lhs(), out);
            collect_deps(f.rhs(), out);
            return;
    }
}

}  // namespace

StreamDeps dep(const Formula& f) {
    StreamDeps out;
    collect_deps(f, out);
    std::map<Variable, Variable> tail_of;  // tail -> stream
    for (const auto& [stream, tail] : out.pairs) {
        auto [it, inserted] = tail_of.emplace(tail, stream);
        if (!inserted) {
            throw Error(ErrorKind::DuplicateTail,
                        "stream " + tail.name + " is the tail of both " +
                            it->second.name + " and " + stream.name);
        }
    }
    return out;
}

Variable head(const Variable& stream, const StreamDeps& deps) {
    std::map<Variable, Variable> predecessor;  // tail -> stream
    for (const auto& [s, tail] : deps.pairs) predecessor.emplace(tail, s);

    Variable current = stream;
    std::set<Variable> visited{current};
    for (auto it = predecessor.find(current); it != predecessor.end();
         it = predecessor.find(current)) {
        current = it->second;
        if (!visited.insert(current).second) {
            throw Error(ErrorKind::DependencyCycle,
                        "stream dependencies form a loop through " + current.name);
        }
    }
    return current;
}

namespace {

Formula simplify_rec(const Formula& f, const StreamDeps& deps) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return f;
        case FormulaKind::Atom: {
            const Constraint& c = f.atom_constraint();
            bool has_cons = false;
            for (const FlatFact& fact : c.facts()) {
                if (fact.kind == FactKind::StreamCons) {
                    has_cons = true;
                    break;
                }
            }
            if (!has_cons) return f;
            std::vector<FlatFact> facts;
            for (const FlatFact& fact : c.facts()) {
                if (fact.kind == FactKind::StreamCons) {
                    facts.push_back(FlatFact{FactKind::StreamCur, head(fact.var, deps),
                                             fact.value, Variable{}});
                } else {
                    facts.push_back(fact);
                }
            }
            return Formula::atom(c.with_facts(std::move(facts)));
        }
        case FormulaKind::Not:
            return Formula::raw_not(simplify_rec(f.child(), deps));
        case FormulaKind::Next:
            return Formula::next(simplify_rec(f.child(), deps));
        case FormulaKind::Exists:
            return Formula::exists(f.bound_var(), simplify_rec(f.child(), deps));
        case FormulaKind::And:
            return Formula::conj(simplify_rec(f.lhs(), deps),
                                 simplify_rec(f.rhs(), deps));
        case FormulaKind::Until:
            return Formula::until(simplify_rec(f.lhs(), deps),
                                  simplify_rec(f.rhs(), deps));
    }
    return f;
}

}  // namespace

Formula simplify(const Formula& f) {
    StreamDeps deps = dep(f);
    return simplify_rec(f, deps);
}

}  // namespace csltl
