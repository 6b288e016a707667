#include "csltl/tableau.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace csltl {

const char* to_string(RuleTag tag) {
    switch (tag) {
        case RuleTag::R1: return "R1";
        case RuleTag::R2: return "R2";
        case RuleTag::R3: return "R3";
        case RuleTag::R4: return "R4";
        case RuleTag::R5: return "R5";
        case RuleTag::R6: return "R6";
        case RuleTag::Exists: return "Exists";
        case RuleTag::NextStep: return "NextStep";
    }
    return "?";
}

// ── Label ────────────────────────────────────────────────────────────────────

bool Label::well_formed() const {
    if (!distinguished) return true;
    if (distinguished->kind() != FormulaKind::Until) return false;
    return formulas.contains(*distinguished) ||
           formulas.contains(Formula::next(*distinguished));
}

std::string Label::to_string() const {
    std::string out = formulas.to_string();
    if (distinguished) out += " !" + distinguished->to_string();
    return out;
}

// ── Inconsistency ────────────────────────────────────────────────────────────

bool is_inconsistent(const Label& label, const ConstraintSystem& cs) {
    // (a) a formula together with its negation
    for (const Formula& f : label.formulas) {
        if (f.kind() == FormulaKind::Not && label.formulas.contains(f.child()))
            return true;
    }
    // (b) the constant false
    if (label.formulas.contains(Formula::falsity())) return true;
    // (c) the join of the positive constraint atoms is false or entails a
    //     negated constraint
    Constraint joined = cs.true_c();
    for (const Formula& f : label.formulas) {
        if (f.kind() == FormulaKind::Atom) joined = cs.join(joined, f.atom_constraint());
    }
    if (cs.is_false(joined)) return true;
    for (const Formula& f : label.formulas) {
        if (f.kind() != FormulaKind::Not) continue;
        const Formula& inner = f.child();
        Constraint negated;
        switch (inner.kind()) {
            case FormulaKind::Atom: negated = inner.atom_constraint(); break;
            case FormulaKind::True: negated = cs.true_c(); break;
            case FormulaKind::False: negated = cs.false_c(); break;
            default: continue;
        }
        if (cs.entails(joined, negated)) return true;
    }
    return false;
}

// ── Alpha rules ──────────────────────────────────────────────────────────────

Label apply_alpha(const Label& label, const Formula& f) {
    if (!label.formulas.contains(f)) {
        throw Error(ErrorKind::NotAlpha, "formula not in label: " + f.to_string());
    }
    Label out = label;
    out.formulas.erase(f);
    if (f.kind() == FormulaKind::Not && f.child().kind() == FormulaKind::Not) {
        out.formulas.insert(f.child().child());  // R1
    } else if (f.kind() == FormulaKind::And) {
        out.formulas.insert(f.lhs());  // R2
        out.formulas.insert(f.rhs());
    } else {
        throw Error(ErrorKind::NotAlpha, "not an alpha formula: " + f.to_string());
    }
    return out;
}

// ── Context and beta rules ───────────────────────────────────────────────────

Formula context_of(const FormulaSet& gamma) {
    if (gamma.empty()) return Formula::falsity();
    std::vector<Formula> negated;
    negated.reserve(gamma.size());
    for (const Formula& g : gamma) negated.push_back(Formula::negate(g));
    Formula out = negated.back();
    for (std::size_t i = negated.size() - 1; i-- > 0;) {
        out = Formula::disj(negated[i], std::move(out));
    }
    return out;
}

std::pair<Label, Label> apply_beta(const Label& label, const Formula& f,
                                   bool use_context) {
    if (!label.formulas.contains(f)) {
        throw Error(ErrorKind::NotBeta, "formula not in label: " + f.to_string());
    }

    const bool negated_pattern = f.kind() == FormulaKind::Not;
    const Formula& body = negated_pattern ? f.child() : f;

    if (use_context && !(f.kind() == FormulaKind::Until)) {
        throw Error(ErrorKind::ContextOnNondistinguished,
                    "context rule on a non-eventuality: " + f.to_string());
    }

    Label b1 = label;
    Label b2 = label;
    b1.formulas.erase(f);
    b2.formulas.erase(f);

    if (negated_pattern && body.kind() == FormulaKind::And) {
        // R3
        b1.formulas.insert(Formula::raw_not(body.lhs()));
        b2.formulas.insert(Formula::raw_not(body.rhs()));
    } else if (negated_pattern && body.kind() == FormulaKind::Until) {
        // R4
        b1.formulas.insert(Formula::raw_not(body.lhs()));
        b1.formulas.insert(Formula::raw_not(body.rhs()));
        b2.formulas.insert(body.lhs());
        b2.formulas.insert(Formula::raw_not(body.rhs()));
        b2.formulas.insert(Formula::raw_not(Formula::next(body)));
    } else if (f.kind() == FormulaKind::Until) {
        if (use_context) {
            // R6: the distinguished eventuality unfolds against its context.
            if (label.distinguished && !(*label.distinguished == f)) {
                throw Error(ErrorKind::ContextOnNondistinguished,
                            "context rule on " + f.to_string() +
                                " while distinguished is " +
                                label.distinguished->to_string());
            }
            Formula cntx = context_of(label.formulas.without(f));
            Formula strengthened =
                Formula::until(Formula::conj(std::move(cntx), f.lhs()), f.rhs());
            b1.formulas.insert(f.rhs());
            b1.distinguished.reset();
            b2.formulas.insert(f.lhs());
            b2.formulas.insert(Formula::raw_not(f.rhs()));
            b2.formulas.insert(Formula::next(strengthened));
            b2.distinguished = strengthened;
        } else {
            // R5
            b1.formulas.insert(f.rhs());
            b2.formulas.insert(f.lhs());
            b2.formulas.insert(Formula::raw_not(f.rhs()));
            b2.formulas.insert(Formula::next(f));
            if (label.distinguished && *label.distinguished == f) {
                b1.distinguished.reset();
            }
        }
    } else {
        throw Error(ErrorKind::NotBeta, "not a beta formula: " + f.to_string());
    }
    return {std::move(b1), std::move(b2)};
}

// ── Exists elimination ───────────────────────────────────────────────────────

Label apply_exists(const Label& label, const Formula& f, const Variable& fresh) {
    assert(f.kind() == FormulaKind::Exists && label.formulas.contains(f));
    for (const Formula& g : label.formulas) {
        if (all_vars(g).count(fresh)) {
            throw Error(ErrorKind::NonFreshVariable,
                        "variable " + fresh.name + " already occurs in the label");
        }
    }
    const Variable& x = f.bound_var();
    bool occurs_in_context = false;
    for (const Formula& g : label.formulas) {
        if (g == f) continue;
        if (free_vars(g).count(x)) {
            occurs_in_context = true;
            break;
        }
    }
    Formula body = occurs_in_context ? rename_free(f.child(), x, fresh) : f.child();
    Label out = label;
    out.formulas.erase(f);
    out.formulas.insert(std::move(body));
    return out;
}

// ── The next operator ────────────────────────────────────────────────────────

Label next_label(const Label& label, bool stream_mode) {
    for (const Formula& f : label.formulas) {
        if (!is_elementary(f)) {
            throw Error(ErrorKind::NonElementaryLabel,
                        "not elementary: " + f.to_string());
        }
    }
    Label out;
    for (const Formula& f : label.formulas) {
        switch (f.kind()) {
            case FormulaKind::Next:
                out.formulas.insert(f.child());
                break;
            case FormulaKind::Not:
                if (f.child().kind() == FormulaKind::Next) {
                    out.formulas.insert(Formula::raw_not(f.child().child()));
                }
                // negated constraints die at the stage boundary
                break;
            case FormulaKind::Atom: {
                const Constraint& c = f.atom_constraint();
                if (stream_mode && c.is_stream_current()) {
                    // S~=c survives unless the next instant rebinds the stream.
                    const FlatFact& fact = c.facts()[0];
                    bool rebound = false;
                    for (const Formula& g : label.formulas) {
                        if (g.kind() != FormulaKind::Next) continue;
                        const Formula& inner = g.child();
                        if (inner.kind() != FormulaKind::Atom) continue;
                        const Constraint& c2 = inner.atom_constraint();
                        if (c2.is_stream_current() && c2.facts()[0].var == fact.var &&
                            c2.facts()[0].value != fact.value) {
                            rebound = true;
                            break;
                        }
                    }
                    if (!rebound) out.formulas.insert(f);
                } else {
                    out.formulas.insert(f);  // monotone store: c carries over
                }
                break;
            }
            case FormulaKind::False:
                // the constant keeps the label unsatisfiable in the next instant
                out.formulas.insert(f);
                break;
            case FormulaKind::True:
                break;
            default:
                break;
        }
    }
    if (label.distinguished && out.formulas.contains(*label.distinguished)) {
        out.distinguished = label.distinguished;  // unwrapped by the clause above
    }
    return out;
}

// ── Formula selection ────────────────────────────────────────────────────────

std::optional<Formula> select_formula(const Label& label) {
    std::optional<Formula> first_exists;
    std::optional<Formula> first_beta_plain;
    std::optional<Formula> first_beta_eventuality;
    for (const Formula& f : label.formulas) {
        if (is_constraint_formula(f)) continue;
        switch (classify(f)) {
            case FormulaClass::AlphaFormula:
                return f;  // canonical order: the first alpha wins
            case FormulaClass::ExistsFormula:
                if (!first_exists) first_exists = f;
                break;
            case FormulaClass::BetaFormula:
                if (is_eventuality(f)) {
                    if (!first_beta_eventuality) first_beta_eventuality = f;
                } else {
                    if (!first_beta_plain) first_beta_plain = f;
                }
                break;
            default:
                break;
        }
    }
    if (first_exists) return first_exists;
    if (label.distinguished && label.formulas.contains(*label.distinguished) &&
        (first_beta_plain || first_beta_eventuality)) {
        return label.distinguished;
    }
    if (first_beta_plain) return first_beta_plain;
    return first_beta_eventuality;
}

// ── Construction ─────────────────────────────────────────────────────────────

namespace {

bool all_constraint_formulas(const FormulaSet& formulas) {
    return std::all_of(formulas.begin(), formulas.end(), is_constraint_formula);
}

Variable make_fresh(const Label& label, const Variable& base) {
    std::set<Variable> used;
    for (const Formula& f : label.formulas) {
        auto vs = all_vars(f);
        used.insert(vs.begin(), vs.end());
    }
    Variable fresh = base;
    do {
        fresh.name += "'";
    } while (used.count(fresh));
    return fresh;
}

// Stage labels restricted to a node span of one branch.
std::map<std::uint32_t, FormulaSet> stage_union(const std::vector<const TableauNode*>& span) {
    std::map<std::uint32_t, FormulaSet> stages;
    for (const TableauNode* n : span) {
        FormulaSet& s = stages[n->stage];
        for (const Formula& f : n->label.formulas) s.insert(f);
    }
    return stages;
}

bool segment_fulfilled(const std::vector<const TableauNode*>& span) {
    auto stages = stage_union(span);
    std::vector<Formula> eventualities;
    for (const auto& [idx, set] : stages) {
        for (const Formula& f : set) {
            if (is_eventuality(f)) eventualities.push_back(f);
        }
    }
    for (const Formula& u : eventualities) {
        bool ok = false;
        for (const auto& [idx, set] : stages) {
            if (set.contains(u.rhs())) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

class Builder {
public:
    Builder(const FormulaSet& phi, const ConstraintSystem& cs, const TableauOptions& opts)
        : cs_(cs), opts_(opts) {
        NodeId root = fresh_node();
        nodes_[root].label.formulas = phi;
        register_eventualities(root);
        work_.push_back(root);
    }

    Tableau run() {
        while (!work_.empty()) {
            NodeId id = work_.back();
            work_.pop_back();
            if (expand(id) && opts_.stop_on_first_open) break;
        }
        return finalize();
    }

private:
    NodeId fresh_node() {
        if (nodes_.size() >= opts_.node_budget) {
            auto partial = std::make_shared<Tableau>(finalize());
            throw BudgetExceededError(std::move(partial));
        }
        TableauNode node;
        node.id = static_cast<NodeId>(nodes_.size());
        nodes_.push_back(std::move(node));
        return nodes_.back().id;
    }

    NodeId add_child(NodeId parent, Label label, RuleTag rule, bool next_stage) {
        NodeId id = fresh_node();
        TableauNode& child = nodes_[id];
        TableauNode& p = nodes_[parent];
        child.label = std::move(label);
        child.parent = parent;
        child.stage = p.stage + (next_stage ? 1 : 0);
        child.fairness = p.fairness;
        p.children.push_back(id);
        p.rule = rule;
        register_eventualities(id);
        return id;
    }

    void register_eventualities(NodeId id) {
        TableauNode& n = nodes_[id];
        for (const Formula& f : n.label.formulas) {
            if (!is_eventuality(f)) continue;
            bool known = std::any_of(n.fairness.begin(), n.fairness.end(),
                                     [&](const auto& e) { return e.eventuality == f; });
            if (!known) n.fairness.push_back({f, ++tick_, 0});
        }
    }

    // The least-recently-distinguished eventuality present bare in the label.
    Formula pick_fair(const TableauNode& n) {
        const TableauNode::FairnessEntry* best = nullptr;
        for (const auto& entry : n.fairness) {
            if (!n.label.formulas.contains(entry.eventuality)) continue;
            if (!best || entry.last_distinguished < best->last_distinguished ||
                (entry.last_distinguished == best->last_distinguished &&
                 entry.first_seen < best->first_seen)) {
                best = &entry;
            }
        }
        assert(best != nullptr);
        return best->eventuality;
    }

    void note_distinguished(NodeId id, const Formula& eventuality) {
        TableauNode& n = nodes_[id];
        for (auto& entry : n.fairness) {
            if (entry.eventuality == eventuality) {
                entry.last_distinguished = ++tick_;
                return;
            }
        }
        n.fairness.push_back({eventuality, ++tick_, tick_});
    }

    // Returns true when the node was marked open.
    bool expand(NodeId id) {
        const Label label = nodes_[id].label;  // copy: nodes_ may reallocate

        // (1) inconsistent nodes close the branch
        if (is_inconsistent(label, cs_)) {
            nodes_[id].mark = NodeMark::Closed;
            return false;
        }
        // (2) a pure constraint label is a model seed
        if (all_constraint_formulas(label.formulas)) {
            nodes_[id].mark = NodeMark::Open;
            return true;
        }
        // (3) cycle: the label already occurred on this branch
        if (auto oldest = oldest_equal_ancestor(id)) {
            std::vector<const TableauNode*> span = span_between(*oldest, id);
            if (segment_fulfilled(span)) {
                nodes_[id].mark = NodeMark::Open;
                nodes_[id].cycle_ancestor = *oldest;
                return true;
            }
            // unfulfilled eventualities: keep expanding, fairness will
            // distinguish them and the context rule decides the branch
        }
        // (4) rule application
        if (auto selected = select_formula(label)) {
            const Formula f = *selected;
            switch (classify(f)) {
                case FormulaClass::AlphaFormula: {
                    RuleTag tag = f.kind() == FormulaKind::Not ? RuleTag::R1 : RuleTag::R2;
                    NodeId c = add_child(id, apply_alpha(label, f), tag, false);
                    work_.push_back(c);
                    return false;
                }
                case FormulaClass::ExistsFormula: {
                    Variable fresh = make_fresh(label, f.bound_var());
                    NodeId c = add_child(id, apply_exists(label, f, fresh),
                                         RuleTag::Exists, false);
                    work_.push_back(c);
                    return false;
                }
                case FormulaClass::BetaFormula: {
                    Label base = label;
                    Formula chosen = f;
                    RuleTag tag;
                    bool context = false;
                    if (!is_eventuality(f)) {
                        tag = f.child().kind() == FormulaKind::And ? RuleTag::R3
                                                                   : RuleTag::R4;
                    } else if (label.distinguished && *label.distinguished == f) {
                        tag = RuleTag::R6;
                        context = true;
                    } else if (label.distinguished) {
                        tag = RuleTag::R5;
                    } else {
                        // fair choice of the eventuality to distinguish
                        chosen = pick_fair(nodes_[id]);
                        base.distinguished = chosen;
                        tag = RuleTag::R6;
                        context = true;
                    }
                    auto [b1, b2] = apply_beta(base, chosen, context);
                    NodeId c1 = add_child(id, std::move(b1), tag, false);
                    NodeId c2 = add_child(id, std::move(b2), tag, false);
                    if (context) {
                        // the chosen eventuality had its round-robin turn
                        note_distinguished(c1, chosen);
                        note_distinguished(c2, chosen);
                    }
                    work_.push_back(c2);
                    work_.push_back(c1);  // explore B1 first
                    return false;
                }
                default:
                    break;
            }
        }
        // (5) elementary label: move to the next stage
        NodeId c = add_child(id, next_label(label, opts_.stream_mode),
                             RuleTag::NextStep, true);
        work_.push_back(c);
        return false;
    }

    std::optional<NodeId> oldest_equal_ancestor(NodeId id) const {
        std::optional<NodeId> oldest;
        const Label& label = nodes_[id].label;
        std::optional<NodeId> cursor = nodes_[id].parent;
        while (cursor) {
            if (nodes_[*cursor].label == label) oldest = *cursor;
            cursor = nodes_[*cursor].parent;
        }
        return oldest;
    }

    std::vector<const TableauNode*> span_between(NodeId from, NodeId to) const {
        std::vector<const TableauNode*> span;
        std::optional<NodeId> cursor = to;
        while (cursor) {
            span.push_back(&nodes_[*cursor]);
            if (*cursor == from) break;
            cursor = nodes_[*cursor].parent;
        }
        std::reverse(span.begin(), span.end());
        return span;
    }

    Tableau finalize() {
        Tableau t;
        t.nodes = nodes_;
        t.root = 0;
        for (const TableauNode& n : t.nodes) {
            if (!n.children.empty()) continue;
            std::vector<NodeId> path;
            std::optional<NodeId> cursor = n.id;
            while (cursor) {
                path.push_back(*cursor);
                cursor = t.nodes[*cursor].parent;
            }
            std::reverse(path.begin(), path.end());
            t.branches.push_back(std::move(path));
        }
        t.verdict = TableauVerdict::Closed;
        for (std::size_t i = 0; i < t.branches.size(); ++i) {
            if (t.nodes[t.branches[i].back()].mark == NodeMark::Open) {
                t.verdict = TableauVerdict::Open;
                t.witness_branch = i;
                break;
            }
        }
        return t;
    }

    const ConstraintSystem& cs_;
    const TableauOptions& opts_;
    std::vector<TableauNode> nodes_;
    std::vector<NodeId> work_;
    std::uint64_t tick_ = 0;
};

}  // namespace

Tableau build_tableau(const FormulaSet& formulas, const ConstraintSystem& cs,
                      const TableauOptions& opts) {
    return Builder(formulas, cs, opts).run();
}

// ── Paths, stages, model extraction ──────────────────────────────────────────

std::vector<NodeId> Tableau::path_to(NodeId id) const {
    std::vector<NodeId> path;
    std::optional<NodeId> cursor = id;
    while (cursor) {
        path.push_back(*cursor);
        cursor = nodes[*cursor].parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

std::vector<FormulaSet> stage_labels(const Tableau& tableau,
                                     const std::vector<NodeId>& branch) {
    std::vector<FormulaSet> stages;
    for (NodeId id : branch) {
        const TableauNode& n = tableau.node(id);
        if (n.stage >= stages.size()) stages.resize(n.stage + 1);
        for (const Formula& f : n.label.formulas) stages[n.stage].insert(f);
    }
    return stages;
}

ConditionalTrace extract_model(const Tableau& tableau, std::size_t branch_index,
                               const ConstraintSystem& cs) {
    if (branch_index >= tableau.branches.size()) {
        throw Error(ErrorKind::BranchNotOpen, "no such branch");
    }
    const std::vector<NodeId>& branch = tableau.branches[branch_index];
    const TableauNode& leaf = tableau.node(branch.back());
    if (leaf.mark != NodeMark::Open) {
        throw Error(ErrorKind::BranchNotOpen, "branch is not open");
    }

    std::vector<FormulaSet> stages = stage_labels(tableau, branch);
    std::vector<Constraint> stores;
    stores.reserve(stages.size());
    for (const FormulaSet& s : stages) {
        Constraint joined = cs.true_c();  // the empty join is true
        for (const Formula& f : s) {
            if (f.kind() == FormulaKind::Atom) joined = cs.join(joined, f.atom_constraint());
        }
        stores.push_back(std::move(joined));
    }

    auto state = [](const Constraint& c) { return CondState::cond_store(c, {}, c); };

    ConditionalTrace trace;
    if (leaf.cycle_ancestor) {
        std::size_t j = tableau.node(*leaf.cycle_ancestor).stage;
        std::size_t k = leaf.stage;
        for (std::size_t i = 0; i < j; ++i) trace.prefix.push_back(state(stores[i]));
        if (j == k) {
            trace.cycle.push_back(state(stores[j]));
        } else {
            // the leaf's own stage replays the ancestor's stage
            for (std::size_t i = j; i < k; ++i) trace.cycle.push_back(state(stores[i]));
        }
    } else {
        // finite branch: the final store repeats forever
        for (std::size_t i = 0; i + 1 < stores.size(); ++i)
            trace.prefix.push_back(state(stores[i]));
        trace.cycle.push_back(state(stores.back()));
    }
    return trace;
}

// ── Verdicts ─────────────────────────────────────────────────────────────────

SatResult check_sat(const FormulaSet& formulas, const ConstraintSystem& cs,
                    const TableauOptions& opts) {
    SatResult result;
    result.tableau = build_tableau(formulas, cs, opts);
    if (result.tableau.verdict == TableauVerdict::Open) {
        result.satisfiable = true;
        result.model = extract_model(result.tableau, *result.tableau.witness_branch, cs);
    }
    return result;
}

ValidityResult check_valid(const Formula& f, const ConstraintSystem& cs,
                           const TableauOptions& opts) {
    SatResult sat = check_sat(FormulaSet{Formula::negate(f)}, cs, opts);
    ValidityResult result;
    result.tableau = std::move(sat.tableau);
    if (sat.satisfiable) {
        result.valid = false;
        result.countermodel = std::move(sat.model);
    } else {
        result.valid = true;
    }
    return result;
}

}  // namespace csltl
