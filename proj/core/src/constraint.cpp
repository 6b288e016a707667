#include "csltl/constraint.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <sstream>

namespace csltl {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ForeignConstraint: return "foreign-constraint";
        case ErrorKind::ClosureViolation: return "closure-violation";
        case ErrorKind::MalformedSystem: return "malformed-system";
        case ErrorKind::UnknownAtom: return "unknown-atom";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Capture: return "capture";
        case ErrorKind::NonFreshVariable: return "non-fresh-variable";
        case ErrorKind::UnsupportedNegatedExists: return "unsupported-negated-exists";
        case ErrorKind::NotAlpha: return "not-alpha";
        case ErrorKind::NotBeta: return "not-beta";
        case ErrorKind::ContextOnNondistinguished: return "context-on-nondistinguished";
        case ErrorKind::NonElementaryLabel: return "non-elementary-label";
        case ErrorKind::BranchNotOpen: return "branch-not-open";
        case ErrorKind::BudgetExceeded: return "budget-exceeded";
        case ErrorKind::DuplicateTail: return "duplicate-tail";
        case ErrorKind::DependencyCycle: return "dependency-cycle";
        case ErrorKind::UnresolvedCall: return "unresolved-call";
        case ErrorKind::ArityMismatch: return "arity-mismatch";
        case ErrorKind::UnboundProcess: return "unbound-process";
        case ErrorKind::SpecUsesExists: return "spec-uses-exists";
        case ErrorKind::ExistsUnsupported: return "exists-unsupported";
        case ErrorKind::ExplosionGuard: return "explosion-guard";
    }
    return "unknown";
}

// ── Constraint ───────────────────────────────────────────────────────────────

std::set<Variable> Constraint::vars() const {
    std::set<Variable> out;
    for (const FlatFact& f : facts_) {
        switch (f.kind) {
            case FactKind::Prop:
                break;
            case FactKind::Eq:
            case FactKind::StreamCur:
                out.insert(f.var);
                break;
            case FactKind::StreamCons:
                out.insert(f.var);
                out.insert(f.tail);
                break;
        }
    }
    return out;
}

Constraint Constraint::canonical_flat(std::uint32_t system_id,
                                      std::vector<FlatFact> facts) {
    std::sort(facts.begin(), facts.end());
    facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
    Constraint c;
    c.system_id_ = system_id;
    // Two Eq facts that disagree on the same variable collapse to false.
    for (std::size_t i = 0; i + 1 < facts.size(); ++i) {
        if (facts[i].kind == FactKind::Eq && facts[i + 1].kind == FactKind::Eq &&
            facts[i].var == facts[i + 1].var && facts[i].value != facts[i + 1].value) {
            c.false_ = true;
            return c;
        }
    }
    c.facts_ = std::move(facts);
    return c;
}

Constraint Constraint::renamed(const Variable& from, const Variable& to) const {
    if (table_ || false_ || from == to) return *this;
    std::vector<FlatFact> facts = facts_;
    for (FlatFact& f : facts) {
        if (f.var == from) f.var = to;
        if (f.kind == FactKind::StreamCons && f.tail == from) f.tail = to;
    }
    return canonical_flat(system_id_, std::move(facts));
}

Constraint Constraint::with_facts(std::vector<FlatFact> facts) const {
    if (table_) {
        throw Error(ErrorKind::ForeignConstraint,
                    "table atom '" + name_ + "' cannot carry flat facts");
    }
    return canonical_flat(system_id_, std::move(facts));
}

std::string Constraint::to_string() const {
    if (table_) return name_;
    if (false_) return "false";
    if (facts_.empty()) return "true";
    std::string out;
    for (std::size_t i = 0; i < facts_.size(); ++i) {
        if (i > 0) out += ", ";
        const FlatFact& f = facts_[i];
        switch (f.kind) {
            case FactKind::Prop:
                out += f.value;
                break;
            case FactKind::Eq:
                out += f.var.name + "=" + f.value;
                break;
            case FactKind::StreamCons:
                out += f.var.name + "=[" + f.value + "|" + f.tail.name + "]";
                break;
            case FactKind::StreamCur:
                out += f.var.name + "~=" + f.value;
                break;
        }
    }
    return out;
}

// ── ConstraintSystem ─────────────────────────────────────────────────────────

namespace {
std::atomic<std::uint32_t> g_next_system_id{1};
}

ConstraintSystem::ConstraintSystem() : id_(g_next_system_id.fetch_add(1)) {}

void ConstraintSystem::check_owned(const Constraint& c) const {
    if (c.system_id() != id_) {
        throw Error(ErrorKind::ForeignConstraint,
                    "constraint '" + c.to_string() + "' does not belong to this system");
    }
}

bool ConstraintSystem::entails(const Constraint& c, const Constraint& d) const {
    check_owned(c);
    check_owned(d);
    return entails_impl(c, d);
}

Constraint ConstraintSystem::join(const Constraint& c, const Constraint& d) const {
    check_owned(c);
    check_owned(d);
    return join_impl(c, d);
}

bool ConstraintSystem::is_false(const Constraint& c) const {
    return entails(c, false_c());
}

std::set<Variable> ConstraintSystem::vars(const Constraint& c) const {
    check_owned(c);
    return c.vars();
}

Constraint ConstraintSystem::rename(const Constraint& c, const Variable& from,
                                    const Variable& to) const {
    check_owned(c);
    return rename_impl(c, from, to);
}

Constraint ConstraintSystem::rename_impl(const Constraint& c, const Variable&,
                                         const Variable&) const {
    return c;  // table atoms carry no variables
}

// ── FlatSystem ───────────────────────────────────────────────────────────────

Constraint FlatSystem::true_c() const {
    Constraint c;
    c.system_id_ = id();
    return c;
}

Constraint FlatSystem::false_c() const {
    Constraint c;
    c.system_id_ = id();
    c.false_ = true;
    return c;
}

Constraint FlatSystem::from_facts(std::vector<FlatFact> facts) const {
    return Constraint::canonical_flat(id(), std::move(facts));
}

Constraint FlatSystem::prop(std::string name) const {
    return from_facts({FlatFact{FactKind::Prop, Variable{}, std::move(name), Variable{}}});
}

Constraint FlatSystem::eq(const Variable& var, std::string value) const {
    return from_facts({FlatFact{FactKind::Eq, var, std::move(value), Variable{}}});
}

Constraint FlatSystem::stream_cons(const Variable& stream, std::string value,
                                   const Variable& tail) const {
    return from_facts({FlatFact{FactKind::StreamCons, stream, std::move(value), tail}});
}

Constraint FlatSystem::stream_cur(const Variable& stream, std::string value) const {
    return from_facts({FlatFact{FactKind::StreamCur, stream, std::move(value), Variable{}}});
}

bool FlatSystem::entails_impl(const Constraint& c, const Constraint& d) const {
    if (c.flat_false()) return true;
    if (d.flat_false()) return false;
    return std::includes(c.facts().begin(), c.facts().end(),
                         d.facts().begin(), d.facts().end());
}

Constraint FlatSystem::join_impl(const Constraint& c, const Constraint& d) const {
    if (c.flat_false() || d.flat_false()) return false_c();
    std::vector<FlatFact> facts = c.facts();
    facts.insert(facts.end(), d.facts().begin(), d.facts().end());
    return from_facts(std::move(facts));
}

Constraint FlatSystem::rename_impl(const Constraint& c, const Variable& from,
                                   const Variable& to) const {
    return c.renamed(from, to);
}

namespace {

bool is_token_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\'' ||
           ch == '-' || ch == '.' || ch == '>' || ch == '<';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

Constraint FlatSystem::parse_atom(std::string_view text) const {
    std::string_view body = trim(text);
    if (body.empty()) {
        throw Error(ErrorKind::UnknownAtom, "empty atom");
    }
    if (body == "true") return true_c();
    if (body == "false") return false_c();

    auto fail = [&] {
        throw Error(ErrorKind::UnknownAtom,
                    "cannot parse flat atom '" + std::string(text) + "'");
    };

    // S~=k
    if (auto pos = body.find("~="); pos != std::string_view::npos) {
        std::string_view var = trim(body.substr(0, pos));
        std::string_view value = trim(body.substr(pos + 2));
        if (var.empty() || value.empty()) fail();
        return stream_cur(Variable{std::string(var)}, std::string(value));
    }
    auto pos = body.find('=');
    if (pos == std::string_view::npos) {
        // bare named fact
        for (char ch : body)
            if (!is_token_char(ch)) fail();
        return prop(std::string(body));
    }
    std::string_view var = trim(body.substr(0, pos));
    std::string_view rhs = trim(body.substr(pos + 1));
    if (var.empty() || rhs.empty()) fail();
    // S=[k|T]
    if (rhs.front() == '[') {
        if (rhs.back() != ']') fail();
        std::string_view inner = rhs.substr(1, rhs.size() - 2);
        auto bar = inner.find('|');
        if (bar == std::string_view::npos) fail();
        std::string_view value = trim(inner.substr(0, bar));
        std::string_view tail = trim(inner.substr(bar + 1));
        if (value.empty() || tail.empty()) fail();
        return stream_cons(Variable{std::string(var)}, std::string(value),
                           Variable{std::string(tail)});
    }
    for (char ch : var)
        if (!is_token_char(ch)) fail();
    for (char ch : rhs)
        if (!is_token_char(ch)) fail();
    return eq(Variable{std::string(var)}, std::string(rhs));
}

// ── FiniteTableSystem ────────────────────────────────────────────────────────

FiniteTableSystem::FiniteTableSystem(
    std::vector<std::string> atoms,
    std::vector<std::pair<std::string, std::string>> entail_pairs,
    JoinTable join_table)
    : names_(std::move(atoms)) {
    const std::size_t n = names_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (names_[i].empty()) {
            throw Error(ErrorKind::MalformedSystem, "empty atom name");
        }
        if (!index_.emplace(names_[i], i).second) {
            throw Error(ErrorKind::MalformedSystem, "duplicate atom '" + names_[i] + "'");
        }
    }
    auto lookup = [&](const std::string& name) -> std::size_t {
        auto it = index_.find(name);
        if (it == index_.end()) {
            throw Error(ErrorKind::UnknownAtom, "unknown atom '" + name + "'");
        }
        return it->second;
    };
    if (!index_.count("true") || !index_.count("false")) {
        throw Error(ErrorKind::MalformedSystem,
                    "a finite system must declare the atoms 'true' and 'false'");
    }
    true_index_ = index_.at("true");
    false_index_ = index_.at("false");

    closure_.assign(n * n, 0);
    auto set = [&](std::size_t i, std::size_t j) { closure_[i * n + j] = 1; };
    for (std::size_t i = 0; i < n; ++i) {
        set(i, i);
        set(i, true_index_);   // every atom entails true
        set(false_index_, i);  // false entails every atom
    }
    for (const auto& [c, d] : entail_pairs) set(lookup(c), lookup(d));
    // Transitive closure (Floyd-Warshall over the boolean matrix).
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (leq(i, k))
                for (std::size_t j = 0; j < n; ++j)
                    if (leq(k, j)) set(i, j);

    // The least upper bound of {i, j}: an upper bound entailed by all upper
    // bounds. With a preorder the lub is unique only up to mutual entailment;
    // any representative is observationally equal.
    auto search_lub = [&](std::size_t i, std::size_t j) -> std::int32_t {
        std::vector<std::size_t> ub;
        for (std::size_t e = 0; e < n; ++e)
            if (leq(e, i) && leq(e, j)) ub.push_back(e);
        for (std::size_t u : ub) {
            bool least = true;
            for (std::size_t v : ub)
                if (!leq(v, u)) { least = false; break; }
            if (least) return static_cast<std::int32_t>(u);
        }
        return -1;
    };

    join_.assign(n * n, -1);
    for (const auto& [pair, result] : join_table) {
        std::size_t i = lookup(pair.first);
        std::size_t j = lookup(pair.second);
        std::size_t e = lookup(result);
        auto violation = [&](const std::string& why) {
            throw Error(ErrorKind::ClosureViolation,
                        "join " + pair.first + " " + pair.second + " = " + result +
                            ": " + why);
        };
        if (!leq(e, i)) violation("result does not entail '" + pair.first + "'");
        if (!leq(e, j)) violation("result does not entail '" + pair.second + "'");
        for (std::size_t u = 0; u < n; ++u) {
            if (leq(u, i) && leq(u, j) && !leq(u, e)) {
                violation("upper bound '" + names_[u] + "' does not entail the result");
            }
        }
        auto& cell = join_[i * n + j];
        auto& mirror = join_[j * n + i];
        for (std::int32_t existing : {cell, mirror}) {
            if (existing >= 0 && existing != static_cast<std::int32_t>(e) &&
                !(leq(e, existing) && leq(existing, e))) {
                violation("conflicts with join = " + names_[existing]);
            }
        }
        cell = static_cast<std::int32_t>(e);
        mirror = static_cast<std::int32_t>(e);
    }
    // Fill the remaining cells with the lub forced by the order.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            auto& cell = join_[i * n + j];
            if (cell >= 0) continue;
            std::int32_t lub = search_lub(i, j);
            if (lub < 0) {
                throw Error(ErrorKind::ClosureViolation,
                            "atoms '" + names_[i] + "' and '" + names_[j] +
                                "' have no least upper bound and no join entry");
            }
            cell = lub;
            join_[j * n + i] = lub;
        }
    }
}

Constraint FiniteTableSystem::make(std::size_t index) const {
    Constraint c;
    c.system_id_ = id();
    c.table_ = true;
    c.index_ = static_cast<std::int32_t>(index);
    c.name_ = names_[index];
    return c;
}

Constraint FiniteTableSystem::true_c() const { return make(true_index_); }
Constraint FiniteTableSystem::false_c() const { return make(false_index_); }

Constraint FiniteTableSystem::atom(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        throw Error(ErrorKind::UnknownAtom, "unknown atom '" + std::string(name) + "'");
    }
    return make(it->second);
}

Constraint FiniteTableSystem::parse_atom(std::string_view text) const {
    return atom(trim(text));
}

bool FiniteTableSystem::entails_impl(const Constraint& c, const Constraint& d) const {
    return leq(static_cast<std::size_t>(c.table_index()),
               static_cast<std::size_t>(d.table_index()));
}

Constraint FiniteTableSystem::join_impl(const Constraint& c, const Constraint& d) const {
    const std::size_t n = names_.size();
    std::int32_t k = join_[static_cast<std::size_t>(c.table_index()) * n +
                           static_cast<std::size_t>(d.table_index())];
    return make(static_cast<std::size_t>(k));
}

std::shared_ptr<const FiniteTableSystem> build_finite_system(
    std::vector<std::string> atoms,
    std::vector<std::pair<std::string, std::string>> entail_pairs,
    FiniteTableSystem::JoinTable join_table) {
    return std::make_shared<const FiniteTableSystem>(
        std::move(atoms), std::move(entail_pairs), std::move(join_table));
}

std::shared_ptr<const FiniteTableSystem> load_finite_system(std::string_view text) {
    std::vector<std::string> atoms;
    std::vector<std::pair<std::string, std::string>> pairs;
    FiniteTableSystem::JoinTable joins;

    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string keyword;
        if (!(ls >> keyword)) continue;
        auto want = [&](std::string& out, const char* what) {
            if (!(ls >> out)) {
                throw ParseError(lineno, 1, std::string("expected ") + what);
            }
        };
        if (keyword == "atom") {
            std::string name;
            want(name, "atom name");
            atoms.push_back(name);
        } else if (keyword == "entails") {
            std::string c, d;
            want(c, "atom name");
            want(d, "atom name");
            pairs.emplace_back(c, d);
        } else if (keyword == "join") {
            std::string c, d, eq, e;
            want(c, "atom name");
            want(d, "atom name");
            want(eq, "'='");
            if (eq != "=") throw ParseError(lineno, 1, "expected '='");
            want(e, "atom name");
            joins[{c, d}] = e;
        } else {
            throw ParseError(lineno, 1, "unknown directive '" + keyword + "'");
        }
        std::string rest;
        if (ls >> rest) throw ParseError(lineno, 1, "trailing text '" + rest + "'");
    }
    return build_finite_system(std::move(atoms), std::move(pairs), std::move(joins));
}

std::shared_ptr<const FiniteTableSystem> load_finite_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::MalformedSystem, "cannot open system file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_finite_system(buf.str());
}

}  // namespace csltl
