#include "csltl/tccp.hpp"

#include <algorithm>
#include <cassert>

#include "csltl/oracle.hpp"

namespace csltl {

// ── Agent ────────────────────────────────────────────────────────────────────

struct Agent::Node {
    AgentKind kind = AgentKind::Skip;
    Constraint constraint;             // Tell, Now
    std::vector<Branch> branches;      // Choice
    std::optional<Agent> first;        // Now then / Par lhs / Hide body
    std::optional<Agent> second;       // Now else / Par rhs
    Variable var;                      // Hide
    std::string process;               // Call
    std::vector<Variable> args;        // Call
};

namespace {
const std::shared_ptr<const Agent::Node>& skip_node() {
    static const auto node = std::make_shared<const Agent::Node>();
    return node;
}
}  // namespace

Agent::Agent() : node_(skip_node()) {}

Agent Agent::skip() { return Agent(skip_node()); }

Agent Agent::tell(Constraint c) {
    auto node = std::make_shared<Agent::Node>();
    node->kind = AgentKind::Tell;
    node->constraint = std::move(c);
    return Agent(std::move(node));
}

Agent Agent::choice(std::vector<Branch> branches) {
    if (branches.empty()) {
        throw Error(ErrorKind::UnresolvedCall, "a choice agent needs at least one branch");
    }
    auto node = std::make_shared<Agent::Node>();
    node->kind = AgentKind::Choice;
    node->branches = std::move(branches);
    return Agent(std::move(node));
}

Agent Agent::now(Constraint cond, Agent then_agent, Agent else_agent) {
    auto node = std::make_shared<Agent::Node>();
    node->kind = AgentKind::Now;
    node->constraint = std::move(cond);
    node->first = std::move(then_agent);
    node->second = std::move(else_agent);
    return Agent(std::move(node));
}

Agent Agent::par(Agent lhs, Agent rhs) {
    auto node = std::make_shared<Agent::Node>();
    node->kind = AgentKind::Par;
    node->first = std::move(lhs);
    node->second = std::move(rhs);
    return Agent(std::move(node));
}

Agent Agent::hide(Variable var, Agent body) {
    auto node = std::make_shared<Agent::Node>();
    node->kind = AgentKind::Hide;
    node->var = std::move(var);
    node->first = std::move(body);
    return Agent(std::move(node));
}

Agent Agent::call(std::string process, std::vector<Variable> args) {
    auto node = std::make_shared<Agent::Node>();
    node->kind = AgentKind::Call;
    node->process = std::move(process);
    node->args = std::move(args);
    return Agent(std::move(node));
}

AgentKind Agent::kind() const noexcept { return node_->kind; }
const Constraint& Agent::constraint() const { return node_->constraint; }
const std::vector<Agent::Branch>& Agent::branches() const { return node_->branches; }
const Agent& Agent::first() const { return *node_->first; }
const Agent& Agent::second() const { return *node_->second; }
const Variable& Agent::bound_var() const { return node_->var; }
const std::string& Agent::process() const { return node_->process; }
const std::vector<Variable>& Agent::args() const { return node_->args; }

std::string Agent::to_string() const {
    switch (kind()) {
        case AgentKind::Skip:
            return "skip";
        case AgentKind::Tell:
            return "tell `" + constraint().to_string() + "`";
        case AgentKind::Choice: {
            std::string out;
            for (std::size_t i = 0; i < branches().size(); ++i) {
                if (i > 0) out += " + ";
                out += "ask `" + branches()[i].guard.to_string() + "` -> " +
                       branches()[i].body.to_string();
            }
            return out;
        }
        case AgentKind::Now:
            return "now `" + constraint().to_string() + "` then " + first().to_string() +
                   " else " + second().to_string();
        case AgentKind::Par:
            return "(" + first().to_string() + " || " + second().to_string() + ")";
        case AgentKind::Hide:
            return "exists " + bound_var().name + " (" + first().to_string() + ")";
        case AgentKind::Call: {
            std::string out = process() + "(";
            for (std::size_t i = 0; i < args().size(); ++i) {
                if (i > 0) out += ",";
                out += args()[i].name;
            }
            return out + ")";
        }
    }
    return "?";
}

// ── Program ──────────────────────────────────────────────────────────────────

namespace {

void check_calls(const Agent& agent, const std::map<ProcessKey, std::vector<Variable>>& known) {
    switch (agent.kind()) {
        case AgentKind::Skip:
        case AgentKind::Tell:
            return;
        case AgentKind::Choice:
            for (const auto& b : agent.branches()) check_calls(b.body, known);
            return;
        case AgentKind::Now:
        case AgentKind::Par:
            check_calls(agent.first(), known);
            check_calls(agent.second(), known);
            return;
        case AgentKind::Hide:
            check_calls(agent.first(), known);
            return;
        case AgentKind::Call: {
            ProcessKey key{agent.process(), agent.args().size()};
            auto it = known.find(key);
            if (it == known.end()) {
                bool name_exists = std::any_of(
                    known.begin(), known.end(),
                    [&](const auto& kv) { return kv.first.name == agent.process(); });
                if (name_exists) {
                    throw Error(ErrorKind::ArityMismatch,
                                "call " + agent.to_string() +
                                    " does not match the declared arity");
                }
                throw Error(ErrorKind::UnresolvedCall,
                            "call to undeclared process " + key.to_string());
            }
            return;
        }
    }
}

}  // namespace

Program::Program(std::vector<Declaration> declarations) : decls_(std::move(declarations)) {
    for (const Declaration& d : decls_) {
        ProcessKey key{d.name, d.params.size()};
        canonical_.emplace(key, d.params);  // first declaration wins
    }
    for (const Declaration& d : decls_) check_calls(d.body, canonical_);
}

std::vector<ProcessKey> Program::processes() const {
    std::vector<ProcessKey> out;
    for (const auto& [key, params] : canonical_) out.push_back(key);
    return out;
}

const std::vector<Variable>& Program::canonical_params(const ProcessKey& key) const {
    auto it = canonical_.find(key);
    if (it == canonical_.end()) {
        throw Error(ErrorKind::UnboundProcess, "no declaration for " + key.to_string());
    }
    return it->second;
}

// ── Interpretation ───────────────────────────────────────────────────────────

void Interpretation::define(ProcessKey key, std::vector<Variable> params, Formula formula) {
    if (params.size() != key.arity) {
        throw Error(ErrorKind::ArityMismatch, "parameter count mismatch for " + key.to_string());
    }
    entries_[std::move(key)] = Entry{std::move(params), std::move(formula)};
}

bool Interpretation::defines(const ProcessKey& key) const { return entries_.count(key) > 0; }

namespace {

// Simultaneous positional substitution: rename through pairwise-fresh
// intermediates so swapping arguments works.
Formula rename_positional(Formula formula, const std::vector<Variable>& from,
                          const std::vector<Variable>& to) {
    assert(from.size() == to.size());
    std::set<Variable> used = all_vars(formula);
    for (const Variable& v : from) used.insert(v);
    for (const Variable& v : to) used.insert(v);

    std::vector<Variable> temps;
    for (std::size_t i = 0; i < from.size(); ++i) {
        Variable tmp{"@" + std::to_string(i)};
        while (used.count(tmp)) tmp.name += "'";
        used.insert(tmp);
        temps.push_back(tmp);
    }
    for (std::size_t i = 0; i < from.size(); ++i) {
        if (free_vars(formula).count(from[i])) {
            formula = rename_free(formula, from[i], temps[i]);
        }
    }
    for (std::size_t i = 0; i < from.size(); ++i) {
        if (free_vars(formula).count(temps[i])) {
            formula = rename_free(formula, temps[i], to[i]);
        }
    }
    return formula;
}

}  // namespace

Formula Interpretation::lookup(const std::string& process,
                               const std::vector<Variable>& args) const {
    ProcessKey key{process, args.size()};
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw Error(ErrorKind::UnboundProcess,
                    "interpretation undefined on " + key.to_string());
    }
    if (it->second.params == args) return it->second.formula;
    return rename_positional(it->second.formula, it->second.params, args);
}

// ── Abstract semantics ───────────────────────────────────────────────────────

Formula faa(const Agent& agent, const Interpretation& interp) {
    switch (agent.kind()) {
        case AgentKind::Skip:
            return Formula::truth();
        case AgentKind::Tell:
            return Formula::next(Formula::atom(agent.constraint()));
        case AgentKind::Choice: {
            // \/_i (c_i & X faa(A_i))  \/  /\_i ~c_i
            const auto& branches = agent.branches();
            Formula suspended = Formula::negate(Formula::atom(branches.back().guard));
            for (std::size_t i = branches.size() - 1; i-- > 0;) {
                suspended = Formula::conj(Formula::negate(Formula::atom(branches[i].guard)),
                                          std::move(suspended));
            }
            Formula out = std::move(suspended);
            for (std::size_t i = branches.size(); i-- > 0;) {
                Formula taken = Formula::conj(Formula::atom(branches[i].guard),
                                              Formula::next(faa(branches[i].body, interp)));
                out = Formula::disj(std::move(taken), std::move(out));
            }
            return out;
        }
        case AgentKind::Now: {
            Formula cond = Formula::atom(agent.constraint());
            Formula then_part = Formula::conj(cond, faa(agent.first(), interp));
            Formula else_part = Formula::conj(Formula::negate(cond),
                                              faa(agent.second(), interp));
            return Formula::disj(std::move(then_part), std::move(else_part));
        }
        case AgentKind::Par:
            return Formula::conj(faa(agent.first(), interp), faa(agent.second(), interp));
        case AgentKind::Hide:
            return Formula::exists(agent.bound_var(), faa(agent.first(), interp));
        case AgentKind::Call:
            return Formula::next(interp.lookup(agent.process(), agent.args()));
    }
    throw Error(ErrorKind::UnboundProcess, "unreachable agent kind");
}

Interpretation fdd(const Program& program, const Interpretation& interp) {
    Interpretation out;
    for (const ProcessKey& key : program.processes()) {
        const std::vector<Variable>& formals = program.canonical_params(key);
        std::vector<Formula> disjuncts;
        for (const Declaration& d : program.declarations()) {
            if (d.name != key.name || d.params.size() != key.arity) continue;
            Formula body = faa(d.body, interp);
            if (d.params != formals) {
                body = rename_positional(std::move(body), d.params, formals);
            }
            disjuncts.push_back(std::move(body));
        }
        assert(!disjuncts.empty());
        Formula combined = disjuncts.back();
        for (std::size_t i = disjuncts.size() - 1; i-- > 0;) {
            combined = Formula::disj(disjuncts[i], std::move(combined));
        }
        out.define(key, formals, std::move(combined));
    }
    return out;
}

// ── Diagnosis ────────────────────────────────────────────────────────────────

namespace {

bool has_exists(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Atom:
            return false;
        case FormulaKind::Exists:
            return true;
        case FormulaKind::Not:
        case FormulaKind::Next:
            return has_exists(f.child());
        case FormulaKind::And:
        case FormulaKind::Until:
            return has_exists(f.lhs()) || has_exists(f.rhs());
    }
    return false;
}

void check_spec_quantifier_free(const Interpretation& spec) {
    for (const auto& [key, entry] : spec.entries()) {
        if (has_exists(entry.formula)) {
            throw Error(ErrorKind::SpecUsesExists,
                        "specification for " + key.to_string() +
                            " uses an existential quantifier");
        }
    }
}

}  // namespace

std::vector<DiagnosisResult> diagnose(const Program& program, const Interpretation& spec,
                                      const ConstraintSystem& cs,
                                      const TableauOptions& opts) {
    check_spec_quantifier_free(spec);
    for (const ProcessKey& key : program.processes()) {
        if (!spec.defines(key)) {
            throw Error(ErrorKind::UnboundProcess,
                        "specification missing for " + key.to_string());
        }
    }
    Interpretation semantics = fdd(program, spec);
    std::vector<DiagnosisResult> results;
    for (const ProcessKey& key : program.processes()) {
        const std::vector<Variable>& formals = program.canonical_params(key);
        Formula behaviour = semantics.lookup(key.name, formals);
        Formula expected = spec.lookup(key.name, formals);
        Formula implication = Formula::implies(behaviour, expected);
        ValidityResult validity = check_valid(implication, cs, opts);

        DiagnosisResult r;
        r.process = key;
        r.checked = implication;
        r.verdict = validity.valid ? ProcessVerdict::Correct : ProcessVerdict::Warning;
        r.countermodel = std::move(validity.countermodel);
        r.tableau = std::move(validity.tableau);
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<UncoveredHint> uncovered_hint(const Program& program,
                                          const Interpretation& spec,
                                          const ConstraintSystem& cs,
                                          const TableauOptions& opts) {
    check_spec_quantifier_free(spec);
    Interpretation semantics = fdd(program, spec);
    std::vector<UncoveredHint> results;
    for (const ProcessKey& key : program.processes()) {
        const std::vector<Variable>& formals = program.canonical_params(key);
        Formula behaviour = semantics.lookup(key.name, formals);
        Formula expected = spec.lookup(key.name, formals);
        // Strip the positive quantifiers of the behaviour side; the reverse
        // implication would otherwise negate them.
        FormulaSet stripped = strip_positive_exists(FormulaSet{behaviour});
        Formula behaviour_stripped = *stripped.begin();
        Formula implication = Formula::implies(expected, behaviour_stripped);
        ValidityResult validity = check_valid(implication, cs, opts);
        results.push_back({key, validity.valid});
    }
    return results;
}

}  // namespace csltl
