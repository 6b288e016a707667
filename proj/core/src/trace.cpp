#include "csltl/trace.hpp"

namespace csltl {

namespace {

void append_states(std::string& out, const std::vector<CondState>& states) {
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (i > 0) out += "·";
        const CondState& s = states[i];
        switch (s.kind) {
            case CondState::Kind::Store: {
                out += "<" + s.positive.to_string() + ",{";
                for (std::size_t k = 0; k < s.negative.size(); ++k) {
                    if (k > 0) out += ",";
                    out += s.negative[k].to_string();
                }
                out += "}," + s.store.to_string() + ">";
                break;
            }
            case CondState::Kind::Stutt: {
                out += "stutt{";
                for (std::size_t k = 0; k < s.negative.size(); ++k) {
                    if (k > 0) out += ",";
                    out += s.negative[k].to_string();
                }
                out += "}";
                break;
            }
            case CondState::Kind::End:
                out += "[X]";
                break;
        }
    }
}

}  // namespace

std::string ConditionalTrace::to_string() const {
    std::string out;
    append_states(out, prefix);
    if (!cycle.empty()) {
        if (!prefix.empty()) out += "·";
        out += "(";
        append_states(out, cycle);
        out += ")^w";
    }
    return out;
}

bool trace_is_monotone(const ConditionalTrace& trace, const ConstraintSystem& cs) {
    const Constraint* previous = nullptr;
    auto step = [&](const CondState& s) {
        if (s.kind != CondState::Kind::Store) return true;
        if (previous && !cs.entails(s.store, *previous)) return false;
        previous = &s.store;
        return true;
    };
    for (const CondState& s : trace.prefix)
        if (!step(s)) return false;
    for (const CondState& s : trace.cycle)
        if (!step(s)) return false;
    // Cycle wrap: the first cycle store must entail the last.
    if (trace.is_lasso()) {
        const Constraint* first = nullptr;
        for (const CondState& s : trace.cycle) {
            if (s.kind == CondState::Kind::Store) {
                first = &s.store;
                break;
            }
        }
        if (first && previous && !cs.entails(*first, *previous)) return false;
    }
    return true;
}

bool trace_is_consistent(const ConditionalTrace& trace, const ConstraintSystem& cs) {
    auto check = [&](const CondState& s) {
        if (s.kind != CondState::Kind::Store) return true;
        for (const Constraint& neg : s.negative)
            if (cs.entails(s.store, neg)) return false;
        return true;
    };
    for (const CondState& s : trace.prefix)
        if (!check(s)) return false;
    for (const CondState& s : trace.cycle)
        if (!check(s)) return false;
    return true;
}

ConditionalTrace replicate_end(const ConditionalTrace& trace, const ConstraintSystem& cs) {
    if (trace.is_lasso()) return trace;
    ConditionalTrace out;
    for (const CondState& s : trace.prefix) {
        if (s.kind == CondState::Kind::End) break;
        out.prefix.push_back(s);
    }
    if (out.prefix.empty()) {
        out.cycle.push_back(CondState::cond_store(cs.true_c(), {}, cs.true_c()));
        return out;
    }
    const CondState& last = out.prefix.back();
    Constraint store = last.kind == CondState::Kind::Store ? last.store : cs.true_c();
    out.cycle.push_back(CondState::cond_store(store, {}, store));
    return out;
}

}  // namespace csltl
