#include "csltl/oracle.hpp"

#include <algorithm>
#include <map>

namespace csltl {

// ── eval ─────────────────────────────────────────────────────────────────────

namespace {

// Evaluation over the canonical positions of an ultimately periodic trace:
// positions 0..P-1 are the prefix, P..P+C-1 the cycle.
class Evaluator {
public:
    Evaluator(const ConditionalTrace& lasso, const ConstraintSystem& cs)
        : trace_(lasso), cs_(cs), prefix_(lasso.prefix.size()), cycle_(lasso.cycle.size()) {}

    bool eval(std::size_t pos, const Formula& f) {
        pos = canonical(pos);
        auto key = std::make_pair(pos, f);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        bool value = compute(pos, f);
        memo_.emplace(std::move(key), value);
        return value;
    }

private:
    std::size_t canonical(std::size_t pos) const {
        if (pos < prefix_ + cycle_) return pos;
        return prefix_ + (pos - prefix_) % cycle_;
    }

    const CondState& state(std::size_t pos) const {
        return pos < prefix_ ? trace_.prefix[pos] : trace_.cycle[pos - prefix_];
    }

    bool atom_holds(std::size_t pos, const Constraint& c) {
        // Stuttering defers the query to the next state, provided the
        // constraint avoids the stutter's negative set. A trace that
        // stutters forever never establishes the atom.
        for (std::size_t step = 0; step <= prefix_ + cycle_; ++step) {
            const CondState& s = state(pos);
            if (s.kind == CondState::Kind::Store) return cs_.entails(s.positive, c);
            for (const Constraint& neg : s.negative) {
                if (cs_.entails(c, neg)) return false;
            }
            pos = canonical(pos + 1);
        }
        return false;
    }

    bool compute(std::size_t pos, const Formula& f) {
        switch (f.kind()) {
            case FormulaKind::True:
                return true;
            case FormulaKind::False:
                return false;
            case FormulaKind::Atom:
                return atom_holds(pos, f.atom_constraint());
            case FormulaKind::Not:
                return !eval(pos, f.child());
            case FormulaKind::And:
                return eval(pos, f.lhs()) && eval(pos, f.rhs());
            case FormulaKind::Next:
                return eval(pos + 1, f.child());
            case FormulaKind::Until: {
                // distinct suffixes: at most P+C of them from any start
                std::size_t cursor = pos;
                for (std::size_t step = 0; step <= prefix_ + cycle_; ++step) {
                    if (eval(cursor, f.rhs())) return true;
                    if (!eval(cursor, f.lhs())) return false;
                    cursor = canonical(cursor + 1);
                }
                return false;
            }
            case FormulaKind::Exists:
                throw Error(ErrorKind::ExistsUnsupported,
                            "the oracle does not evaluate quantifiers: " + f.to_string());
        }
        return false;
    }

    const ConditionalTrace& trace_;
    const ConstraintSystem& cs_;
    std::size_t prefix_;
    std::size_t cycle_;
    std::map<std::pair<std::size_t, Formula>, bool> memo_;
};

}  // namespace

bool eval(const ConditionalTrace& trace, const Formula& f, const ConstraintSystem& cs) {
    ConditionalTrace lasso = replicate_end(trace, cs);
    return Evaluator(lasso, cs).eval(0, f);
}

bool eval_all(const ConditionalTrace& trace, const FormulaSet& formulas,
              const ConstraintSystem& cs) {
    ConditionalTrace lasso = replicate_end(trace, cs);
    Evaluator ev(lasso, cs);
    for (const Formula& f : formulas) {
        if (!ev.eval(0, f)) return false;
    }
    return true;
}

// ── Enumeration ──────────────────────────────────────────────────────────────

void enumerate_traces(const ConstraintSystem& cs, const std::vector<Constraint>& atoms,
                      std::size_t max_prefix, std::size_t max_cycle,
                      std::size_t explosion_guard,
                      const std::function<bool(const ConditionalTrace&)>& visit) {
    // Store universe: joins of subsets of the atoms, false excluded.
    std::vector<Constraint> stores;
    const std::size_t n = atoms.size();
    if (n > 20) {
        throw Error(ErrorKind::ExplosionGuard, "too many atoms to enumerate");
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Constraint store = cs.true_c();
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (std::size_t{1} << i)) store = cs.join(store, atoms[i]);
        }
        if (cs.is_false(store)) continue;
        if (std::find(stores.begin(), stores.end(), store) == stores.end()) {
            stores.push_back(store);
        }
    }

    std::size_t emitted = 0;
    auto state = [](const Constraint& c) { return CondState::cond_store(c, {}, c); };

    auto emit = [&](const std::vector<Constraint>& prefix, const Constraint& cycle_store,
                    std::size_t cycle_len) {
        if (++emitted > explosion_guard) {
            throw Error(ErrorKind::ExplosionGuard,
                        "trace enumeration exceeded " + std::to_string(explosion_guard));
        }
        ConditionalTrace t;
        for (const Constraint& c : prefix) t.prefix.push_back(state(c));
        for (std::size_t i = 0; i < cycle_len; ++i) t.cycle.push_back(state(cycle_store));
        return visit(t);
    };

    // Depth-first over monotone prefixes; every extension also closes with
    // each compatible constant cycle.
    std::vector<Constraint> prefix;
    std::function<bool()> walk = [&]() -> bool {
        for (const Constraint& cycle_store : stores) {
            if (!prefix.empty() && !cs.entails(cycle_store, prefix.back())) continue;
            for (std::size_t len = 1; len <= max_cycle; ++len) {
                if (!emit(prefix, cycle_store, len)) return false;
            }
        }
        if (prefix.size() == max_prefix) return true;
        for (const Constraint& next : stores) {
            if (!prefix.empty() && !cs.entails(next, prefix.back())) continue;
            prefix.push_back(next);
            bool keep_going = walk();
            prefix.pop_back();
            if (!keep_going) return false;
        }
        return true;
    };
    walk();
}

std::vector<ConditionalTrace> enumerate_traces(const ConstraintSystem& cs,
                                               const std::vector<Constraint>& atoms,
                                               const OracleBounds& bounds) {
    std::vector<ConditionalTrace> out;
    enumerate_traces(cs, atoms, bounds.max_prefix, bounds.max_cycle, bounds.max_traces,
                     [&](const ConditionalTrace& t) {
                         out.push_back(t);
                         return true;
                     });
    return out;
}

// ── Bounded search ───────────────────────────────────────────────────────────

OracleVerdict oracle_sat(const FormulaSet& formulas, const ConstraintSystem& cs,
                         const std::vector<Constraint>& atoms,
                         const OracleBounds& bounds) {
    OracleVerdict verdict;
    enumerate_traces(cs, atoms, bounds.max_prefix, bounds.max_cycle, bounds.max_traces,
                     [&](const ConditionalTrace& t) {
                         if (eval_all(t, formulas, cs)) {
                             verdict.witness = t;
                             return false;
                         }
                         return true;
                     });
    return verdict;
}

OracleVerdict oracle_sat_over(const FormulaSet& formulas, const ConstraintSystem& cs,
                              const std::vector<ConditionalTrace>& traces) {
    OracleVerdict verdict;
    for (const ConditionalTrace& t : traces) {
        if (eval_all(t, formulas, cs)) {
            verdict.witness = t;
            break;
        }
    }
    return verdict;
}

// ── Quantifier stripping and atom collection ─────────────────────────────────

namespace {

Formula strip_rec(const Formula& f, const std::set<Variable>& avoid) {
    switch (f.kind()) {
        case FormulaKind::And:
            return Formula::conj(strip_rec(f.lhs(), avoid), strip_rec(f.rhs(), avoid));
        case FormulaKind::Exists: {
            const Variable& x = f.bound_var();
            Formula body = f.child();
            if (avoid.count(x)) {
                Variable fresh = x;
                std::set<Variable> used = all_vars(body);
                used.insert(avoid.begin(), avoid.end());
                do {
                    fresh.name += "'";
                } while (used.count(fresh));
                body = rename_free(body, x, fresh);
            }
            return strip_rec(body, avoid);
        }
        default:
            return f;
    }
}

void collect_atoms_rec(const Formula& f, std::vector<Constraint>& out) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return;
        case FormulaKind::Atom: {
            const Constraint& c = f.atom_constraint();
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
            return;
        }
        case FormulaKind::Not:
        case FormulaKind::Next:
        case FormulaKind::Exists:
            collect_atoms_rec(f.child(), out);
            return;
        case FormulaKind::And:
        case FormulaKind::Until:
            collect_atoms_rec(f.lhs(), out);
            collect_atoms_rec(f.rhs(), out);
            return;
    }
}

}  // namespace

FormulaSet strip_positive_exists(const FormulaSet& formulas) {
    std::set<Variable> avoid;
    for (const Formula& f : formulas) {
        auto vs = free_vars(f);
        avoid.insert(vs.begin(), vs.end());
    }
    FormulaSet out;
    for (const Formula& f : formulas) out.insert(strip_rec(f, avoid));
    return out;
}

std::vector<Constraint> collect_atoms(const FormulaSet& formulas) {
    std::vector<Constraint> out;
    for (const Formula& f : formulas) collect_atoms_rec(f, out);
    return out;
}

}  // namespace csltl
