#include "csltl/formula.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace csltl {

// ── Node ─────────────────────────────────────────────────────────────────────

struct Formula::Node {
    FormulaKind kind;
    Constraint atom;                // Atom
    Variable var;                   // Exists
    std::optional<Formula> first;   // Not/Next/Exists child, And/Until lhs
    std::optional<Formula> second;  // And/Until rhs
    std::size_t hash = 0;
};

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_string(const std::string& s) {
    // FNV-1a, run- and platform-stable (unlike std::hash).
    std::size_t h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t hash_constraint(const Constraint& c) {
    std::size_t h = hash_combine(c.system_id(), c.is_table_atom() ? 2 : c.flat_false());
    if (c.is_table_atom()) {
        h = hash_combine(h, hash_string(c.table_name()));
    } else {
        for (const FlatFact& f : c.facts()) {
            h = hash_combine(h, static_cast<std::size_t>(f.kind));
            h = hash_combine(h, hash_string(f.var.name));
            h = hash_combine(h, hash_string(f.value));
            h = hash_combine(h, hash_string(f.tail.name));
        }
    }
    return h;
}

std::strong_ordering compare_constraint(const Constraint& a, const Constraint& b) {
    return a <=> b;
}

}  // namespace

// ── Constructors ─────────────────────────────────────────────────────────────

namespace {

std::shared_ptr<const Formula::Node> make_node(Formula::Node node) {
    std::size_t h = static_cast<std::size_t>(node.kind) + 0x517cc1b7;
    switch (node.kind) {
        case FormulaKind::True:
        case FormulaKind::False:
            break;
        case FormulaKind::Atom:
            h = hash_combine(h, hash_constraint(node.atom));
            break;
        case FormulaKind::Not:
        case FormulaKind::Next:
            h = hash_combine(h, node.first->hash());
            break;
        case FormulaKind::Exists:
            h = hash_combine(h, hash_string(node.var.name));
            h = hash_combine(h, node.first->hash());
            break;
        case FormulaKind::And:
        case FormulaKind::Until:
            h = hash_combine(h, node.first->hash());
            h = hash_combine(h, node.second->hash());
            break;
    }
    node.hash = h;
    return std::make_shared<const Formula::Node>(std::move(node));
}

const std::shared_ptr<const Formula::Node>& true_node() {
    static const std::shared_ptr<const Formula::Node> node =
        make_node({FormulaKind::True, {}, {}, std::nullopt, std::nullopt, 0});
    return node;
}

const std::shared_ptr<const Formula::Node>& false_node() {
    static const std::shared_ptr<const Formula::Node> node =
        make_node({FormulaKind::False, {}, {}, std::nullopt, std::nullopt, 0});
    return node;
}

}  // namespace

Formula::Formula() : node_(true_node()) {}

Formula Formula::truth() { return Formula(true_node()); }
Formula Formula::falsity() { return Formula(false_node()); }

Formula Formula::atom(Constraint c) {
    return Formula(make_node({FormulaKind::Atom, std::move(c), {}, std::nullopt, std::nullopt, 0}));
}

Formula Formula::raw_not(Formula f) {
    return Formula(make_node({FormulaKind::Not, {}, {}, std::move(f), std::nullopt, 0}));
}

Formula Formula::negate(Formula f) {
    if (f.kind() == FormulaKind::Not) return f.child();
    return raw_not(std::move(f));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
    if (lhs.kind() == FormulaKind::True) return rhs;
    if (rhs.kind() == FormulaKind::True) return lhs;
    return Formula(make_node({FormulaKind::And, {}, {}, std::move(lhs), std::move(rhs), 0}));
}

Formula Formula::exists(Variable var, Formula body) {
    return Formula(
        make_node({FormulaKind::Exists, {}, std::move(var), std::move(body), std::nullopt, 0}));
}

Formula Formula::next(Formula f) {
    return Formula(make_node({FormulaKind::Next, {}, {}, std::move(f), std::nullopt, 0}));
}

Formula Formula::until(Formula lhs, Formula rhs) {
    return Formula(make_node({FormulaKind::Until, {}, {}, std::move(lhs), std::move(rhs), 0}));
}

Formula Formula::disj(Formula lhs, Formula rhs) {
    return negate(conj(negate(std::move(lhs)), negate(std::move(rhs))));
}

Formula Formula::implies(Formula lhs, Formula rhs) {
    return disj(negate(std::move(lhs)), std::move(rhs));
}

Formula Formula::eventually(Formula f) { return until(truth(), std::move(f)); }

Formula Formula::always(Formula f) {
    return raw_not(until(truth(), raw_not(std::move(f))));
}

Formula Formula::weak_until(Formula lhs, Formula rhs) {
    Formula u = until(lhs, std::move(rhs));
    return disj(std::move(u), always(std::move(lhs)));
}

// ── Accessors ────────────────────────────────────────────────────────────────

FormulaKind Formula::kind() const noexcept { return node_->kind; }

const Constraint& Formula::atom_constraint() const {
    assert(node_->kind == FormulaKind::Atom);
    return node_->atom;
}

const Variable& Formula::bound_var() const {
    assert(node_->kind == FormulaKind::Exists);
    return node_->var;
}

const Formula& Formula::child() const {
    assert(node_->kind == FormulaKind::Not || node_->kind == FormulaKind::Next ||
           node_->kind == FormulaKind::Exists);
    return *node_->first;
}

const Formula& Formula::lhs() const {
    assert(node_->kind == FormulaKind::And || node_->kind == FormulaKind::Until);
    return *node_->first;
}

const Formula& Formula::rhs() const {
    assert(node_->kind == FormulaKind::And || node_->kind == FormulaKind::Until);
    return *node_->second;
}

std::size_t Formula::hash() const noexcept { return node_->hash; }

bool Formula::operator==(const Formula& other) const noexcept {
    if (node_ == other.node_) return true;
    if (node_->hash != other.node_->hash) return false;
    return (*this <=> other) == std::strong_ordering::equal;
}

std::strong_ordering Formula::operator<=>(const Formula& other) const noexcept {
    if (node_ == other.node_) return std::strong_ordering::equal;
    if (auto c = node_->kind <=> other.node_->kind; c != 0) return c;
    switch (node_->kind) {
        case FormulaKind::True:
        case FormulaKind::False:
            return std::strong_ordering::equal;
        case FormulaKind::Atom:
            return compare_constraint(node_->atom, other.node_->atom);
        case FormulaKind::Not:
        case FormulaKind::Next:
            return *node_->first <=> *other.node_->first;
        case FormulaKind::Exists:
            if (auto c = node_->var <=> other.node_->var; c != 0) return c;
            return *node_->first <=> *other.node_->first;
        case FormulaKind::And:
        case FormulaKind::Until:
            if (auto c = *node_->first <=> *other.node_->first; c != 0) return c;
            return *node_->second <=> *other.node_->second;
    }
    return std::strong_ordering::equal;
}

// ── Classification ───────────────────────────────────────────────────────────

FormulaClass classify(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return FormulaClass::TrueFalse;
        case FormulaKind::Atom:
            return FormulaClass::ConstraintFormula;
        case FormulaKind::And:
            return FormulaClass::AlphaFormula;
        case FormulaKind::Next:
            return FormulaClass::NextFormula;
        case FormulaKind::Until:
            return FormulaClass::BetaFormula;
        case FormulaKind::Exists:
            return FormulaClass::ExistsFormula;
        case FormulaKind::Not:
            switch (f.child().kind()) {
                case FormulaKind::True:
                case FormulaKind::False:
                case FormulaKind::Atom:
                    return FormulaClass::ConstraintFormula;
                case FormulaKind::Not:
                    return FormulaClass::AlphaFormula;  // R1
                case FormulaKind::And:
                case FormulaKind::Until:
                    return FormulaClass::BetaFormula;
                case FormulaKind::Next:
                    return FormulaClass::NextFormula;
                case FormulaKind::Exists:
                    throw Error(ErrorKind::UnsupportedNegatedExists,
                                "no rule handles " + f.to_string());
            }
    }
    throw Error(ErrorKind::Parse, "unreachable formula kind");
}

bool is_eventuality(const Formula& f) { return f.kind() == FormulaKind::Until; }

bool is_constraint_formula(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Atom:
            return true;
        case FormulaKind::Not: {
            FormulaKind k = f.child().kind();
            return k == FormulaKind::True || k == FormulaKind::False ||
                   k == FormulaKind::Atom;
        }
        default:
            return false;
    }
}

bool is_elementary(const Formula& f) {
    if (is_constraint_formula(f)) return true;
    if (f.kind() == FormulaKind::Next) return true;
    return f.kind() == FormulaKind::Not && f.child().kind() == FormulaKind::Next;
}

SignedAtom constraint_of(const Formula& f, const ConstraintSystem& cs) {
    const Formula* body = &f;
    bool positive = true;
    if (f.kind() == FormulaKind::Not) {
        positive = false;
        body = &f.child();
    }
    switch (body->kind()) {
        case FormulaKind::True:
            return {positive, cs.true_c()};
        case FormulaKind::False:
            return {positive, cs.false_c()};
        case FormulaKind::Atom:
            return {positive, body->atom_constraint()};
        default:
            throw Error(ErrorKind::NotAlpha, "not a constraint formula: " + f.to_string());
    }
}

// ── Variable hygiene ─────────────────────────────────────────────────────────

namespace {

void collect_free(const Formula& f, std::set<Variable>& bound, std::set<Variable>& out) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return;
        case FormulaKind::Atom:
            for (const Variable& v : f.atom_constraint().vars())
                if (!bound.count(v)) out.insert(v);
            return;
        case FormulaKind::Not:
        case FormulaKind::Next:
            collect_free(f.child(), bound, out);
            return;
        case FormulaKind::Exists: {
            bool fresh = bound.insert(f.bound_var()).second;
            collect_free(f.child(), bound, out);
            if (fresh) bound.erase(f.bound_var());
            return;
        }
        case FormulaKind::And:
        case FormulaKind::Until:
            collect_free(f.lhs(), bound, out);
            collect_free(f.rhs(), bound, out);
            return;
    }
}

void collect_all(const Formula& f, std::set<Variable>& out) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return;
        case FormulaKind::Atom: {
            auto vs = f.atom_constraint().vars();
            out.insert(vs.begin(), vs.end());
            return;
        }
        case FormulaKind::Not:
        case FormulaKind::Next:
            collect_all(f.child(), out);
            return;
        case FormulaKind::Exists:
            out.insert(f.bound_var());
            collect_all(f.child(), out);
            return;
        case FormulaKind::And:
        case FormulaKind::Until:
            collect_all(f.lhs(), out);
            collect_all(f.rhs(), out);
            return;
    }
}

Formula rename_rec(const Formula& f, const Variable& from, const Variable& to) {
    switch (f.kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return f;
        case FormulaKind::Atom:
            return Formula::atom(f.atom_constraint().renamed(from, to));
        case FormulaKind::Not:
            return Formula::raw_not(rename_rec(f.child(), from, to));
        case FormulaKind::Next:
            return Formula::next(rename_rec(f.child(), from, to));
        case FormulaKind::Exists:
            if (f.bound_var() == from) return f;  // bound occurrences untouched
            return Formula::exists(f.bound_var(), rename_rec(f.child(), from, to));
        case FormulaKind::And:
            return Formula::conj(rename_rec(f.lhs(), from, to),
                                 rename_rec(f.rhs(), from, to));
        case FormulaKind::Until:
            return Formula::until(rename_rec(f.lhs(), from, to),
                                  rename_rec(f.rhs(), from, to));
    }
    return f;
}

}  // namespace

std::set<Variable> free_vars(const Formula& f) {
    std::set<Variable> bound, out;
    collect_free(f, bound, out);
    return out;
}

std::set<Variable> all_vars(const Formula& f) {
    std::set<Variable> out;
    collect_all(f, out);
    return out;
}

Formula rename_free(const Formula& f, const Variable& from, const Variable& to) {
    if (from == to) return f;
    if (all_vars(f).count(to)) {
        throw Error(ErrorKind::Capture,
                    "renaming " + from.name + " to " + to.name + " would capture in " +
                        f.to_string());
    }
    return rename_rec(f, from, to);
}

// ── FormulaSet ───────────────────────────────────────────────────────────────

FormulaSet::FormulaSet(std::initializer_list<Formula> init) {
    for (const Formula& f : init) insert(f);
}

bool FormulaSet::insert(Formula f) {
    auto pos = std::lower_bound(items_.begin(), items_.end(), f);
    if (pos != items_.end() && *pos == f) return false;
    items_.insert(pos, std::move(f));
    return true;
}

bool FormulaSet::erase(const Formula& f) {
    auto pos = std::lower_bound(items_.begin(), items_.end(), f);
    if (pos == items_.end() || !(*pos == f)) return false;
    items_.erase(pos);
    return true;
}

bool FormulaSet::contains(const Formula& f) const {
    auto pos = std::lower_bound(items_.begin(), items_.end(), f);
    return pos != items_.end() && *pos == f;
}

FormulaSet FormulaSet::with(Formula f) const {
    FormulaSet out = *this;
    out.insert(std::move(f));
    return out;
}

FormulaSet FormulaSet::without(const Formula& f) const {
    FormulaSet out = *this;
    out.erase(f);
    return out;
}

bool FormulaSet::operator==(const FormulaSet& other) const {
    return items_ == other.items_;
}

std::strong_ordering FormulaSet::operator<=>(const FormulaSet& other) const {
    return std::lexicographical_compare_three_way(items_.begin(), items_.end(),
                                                  other.items_.begin(),
                                                  other.items_.end());
}

std::string FormulaSet::to_string() const {
    std::string out = "{";
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i > 0) out += ", ";
        out += items_[i].to_string();
    }
    return out + "}";
}

// ── Printing ─────────────────────────────────────────────────────────────────
//
// The printer recognises the derived-operator patterns the constructors
// produce, so parse(print(f)) rebuilds the same tree:
//   ~(a & b)            ->  (~a | ~b)     with double negations collapsed
//   ~(true U ~f)        ->  G f
//   ~(true U g), g not ~ -> ~F g
//   true U f            ->  F f

namespace {

std::string print(const Formula& f);

bool is_always_pattern(const Formula& f) {
    return f.kind() == FormulaKind::Not && f.child().kind() == FormulaKind::Until &&
           f.child().lhs().kind() == FormulaKind::True &&
           f.child().rhs().kind() == FormulaKind::Not;
}

std::string print(const Formula& f) {
    switch (f.kind()) {
        case FormulaKind::True:
            return "true";
        case FormulaKind::False:
            return "false";
        case FormulaKind::Atom:
            return "`" + f.atom_constraint().to_string() + "`";
        case FormulaKind::Next:
            return "X " + print(f.child());
        case FormulaKind::Exists:
            return "E " + f.bound_var().name + ". " + print(f.child());
        case FormulaKind::Until:
            if (f.lhs().kind() == FormulaKind::True) return "F " + print(f.rhs());
            return "(" + print(f.lhs()) + " U " + print(f.rhs()) + ")";
        case FormulaKind::And: {
            // flatten the right spine: (a & b & c)
            std::string out = "(" + print(f.lhs());
            const Formula* rest = &f.rhs();
            while (rest->kind() == FormulaKind::And) {
                out += " & " + print(rest->lhs());
                rest = &rest->rhs();
            }
            out += " & " + print(*rest) + ")";
            return out;
        }
        case FormulaKind::Not: {
            if (is_always_pattern(f)) return "G " + print(f.child().rhs().child());
            const Formula& inner = f.child();
            if (inner.kind() == FormulaKind::And) {
                // disjunction sugar; collapse the negations on the disjuncts
                std::vector<Formula> parts;
                parts.push_back(Formula::negate(inner.lhs()));
                const Formula* rest = &inner.rhs();
                while (rest->kind() == FormulaKind::And) {
                    parts.push_back(Formula::negate(rest->lhs()));
                    rest = &rest->rhs();
                }
                parts.push_back(Formula::negate(*rest));
                std::string out = "(" + print(parts[0]);
                for (std::size_t i = 1; i < parts.size(); ++i) out += " | " + print(parts[i]);
                return out + ")";
            }
            return "~" + print(inner);
        }
    }
    return "?";
}

}  // namespace

std::string Formula::to_string() const { return print(*this); }

}  // namespace csltl
