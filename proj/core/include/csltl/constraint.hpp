#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csltl/errors.hpp"

namespace csltl {

// ── Variable ─────────────────────────────────────────────────────────────────

struct Variable {
    std::string name;

    Variable() = default;
    explicit Variable(std::string n) : name(std::move(n)) {}

    auto operator<=>(const Variable&) const = default;
};

// ── Flat constraint facts ────────────────────────────────────────────────────
//
// Atomic facts of the builtin flat system. Constants are uninterpreted tokens;
// two Eq facts on the same variable with different constants are jointly
// inconsistent, stream facts never conflict with each other.

enum class FactKind : std::uint8_t {
    Prop,        // bare named fact, no variables
    Eq,          // x = k
    StreamCons,  // S = [k | S']
    StreamCur,   // S ~= k   (current value of stream S)
};

struct FlatFact {
    FactKind kind = FactKind::Eq;
    Variable var;       // Eq: the variable; streams: the stream name
    std::string value;  // the constant token; Prop: the fact name
    Variable tail;      // StreamCons only: the tail stream

    auto operator<=>(const FlatFact&) const = default;
};

// ── Constraint ───────────────────────────────────────────────────────────────
//
// A constraint is an opaque token owned by exactly one ConstraintSystem.
// The token is self-describing (it can print itself and report its variables),
// but entailment and join are only meaningful through the owning system.

class ConstraintSystem;

class Constraint {
public:
    Constraint() = default;

    bool valid() const noexcept { return system_id_ != 0; }
    std::uint32_t system_id() const noexcept { return system_id_; }

    bool is_table_atom() const noexcept { return table_; }
    std::int32_t table_index() const noexcept { return index_; }
    const std::string& table_name() const noexcept { return name_; }

    bool flat_false() const noexcept { return false_; }
    const std::vector<FlatFact>& facts() const noexcept { return facts_; }

    // True when the token is exactly one StreamCur fact; used by the modified
    // next operator in stream mode.
    bool is_stream_current() const noexcept {
        return !table_ && !false_ && facts_.size() == 1 &&
               facts_[0].kind == FactKind::StreamCur;
    }

    std::set<Variable> vars() const;
    std::string to_string() const;

    // Token-level substitution; keeps the owning system. Table atoms carry no
    // variables and come back unchanged. Flat tokens are re-canonicalised, so
    // a rename that makes two Eq facts collide yields the false token.
    Constraint renamed(const Variable& from, const Variable& to) const;

    // Flat tokens only: a new token of the same system with the given facts.
    Constraint with_facts(std::vector<FlatFact> facts) const;

    auto operator<=>(const Constraint&) const = default;

private:
    friend class FlatSystem;
    friend class FiniteTableSystem;

    static Constraint canonical_flat(std::uint32_t system_id,
                                     std::vector<FlatFact> facts);

    std::uint32_t system_id_ = 0;
    bool table_ = false;
    std::int32_t index_ = -1;       // table systems: atom index
    std::string name_;              // table systems: atom name, for printing
    bool false_ = false;            // flat systems: the bottom-of-truth token
    std::vector<FlatFact> facts_;   // flat systems: sorted, duplicate-free
};

// ── ConstraintSystem ─────────────────────────────────────────────────────────
//
// Entailment lattice interface. `entails(c, d)` reads "c carries at least the
// information of d"; join is the least upper bound in that order, true_c the
// least element and false_c the greatest. Instances are immutable after
// construction and safe to share across threads.

class ConstraintSystem {
public:
    virtual ~ConstraintSystem() = default;

    ConstraintSystem(const ConstraintSystem&) = delete;
    ConstraintSystem& operator=(const ConstraintSystem&) = delete;

    std::uint32_t id() const noexcept { return id_; }

    bool entails(const Constraint& c, const Constraint& d) const;
    Constraint join(const Constraint& c, const Constraint& d) const;
    virtual Constraint true_c() const = 0;
    virtual Constraint false_c() const = 0;
    bool is_false(const Constraint& c) const;

    std::set<Variable> vars(const Constraint& c) const;
    Constraint rename(const Constraint& c, const Variable& from,
                      const Variable& to) const;

    // Resolve the text of a backtick-quoted atom against this system.
    virtual Constraint parse_atom(std::string_view text) const = 0;

protected:
    ConstraintSystem();

    virtual bool entails_impl(const Constraint& c, const Constraint& d) const = 0;
    virtual Constraint join_impl(const Constraint& c, const Constraint& d) const = 0;
    virtual Constraint rename_impl(const Constraint& c, const Variable& from,
                                   const Variable& to) const;

    void check_owned(const Constraint& c) const;

private:
    std::uint32_t id_;
};

// ── FlatSystem ───────────────────────────────────────────────────────────────
//
// Constraints are finite conjunctions of flat facts, plus a distinguished
// false. Entailment is fact inclusion; join is fact union, collapsing to
// false when two Eq facts disagree on one variable.

class FlatSystem final : public ConstraintSystem {
public:
    FlatSystem() = default;

    Constraint true_c() const override;
    Constraint false_c() const override;
    Constraint parse_atom(std::string_view text) const override;

    Constraint prop(std::string name) const;
    Constraint eq(const Variable& var, std::string value) const;
    Constraint stream_cons(const Variable& stream, std::string value,
                           const Variable& tail) const;
    Constraint stream_cur(const Variable& stream, std::string value) const;
    Constraint from_facts(std::vector<FlatFact> facts) const;

protected:
    bool entails_impl(const Constraint& c, const Constraint& d) const override;
    Constraint join_impl(const Constraint& c, const Constraint& d) const override;
    Constraint rename_impl(const Constraint& c, const Variable& from,
                           const Variable& to) const override;
};

// ── FiniteTableSystem ────────────────────────────────────────────────────────
//
// A finite lattice given by named atoms, entailment pairs and a join table.
// The constructor computes the reflexive-transitive closure of the pairs,
// always adds c |- true and false |- c, fills joins that are forced by the
// order, and rejects any table that breaks the least-upper-bound laws.

class FiniteTableSystem final : public ConstraintSystem {
public:
    using JoinTable = std::map<std::pair<std::string, std::string>, std::string>;

    FiniteTableSystem(std::vector<std::string> atoms,
                      std::vector<std::pair<std::string, std::string>> entail_pairs,
                      JoinTable join_table);

    Constraint true_c() const override;
    Constraint false_c() const override;
    Constraint parse_atom(std::string_view text) const override;

    Constraint atom(std::string_view name) const;
    const std::vector<std::string>& atom_names() const noexcept { return names_; }
    std::size_t size() const noexcept { return names_.size(); }

protected:
    bool entails_impl(const Constraint& c, const Constraint& d) const override;
    Constraint join_impl(const Constraint& c, const Constraint& d) const override;

private:
    Constraint make(std::size_t index) const;
    bool leq(std::size_t i, std::size_t j) const { return closure_[i * names_.size() + j]; }

    std::vector<std::string> names_;
    std::map<std::string, std::size_t> index_;
    std::vector<char> closure_;      // closure_[i*n+j] <=> atom i entails atom j
    std::vector<std::int32_t> join_; // join_[i*n+j] = index of the lub
    std::size_t true_index_ = 0;
    std::size_t false_index_ = 0;
};

// Build a finite system, validating the lattice laws.
std::shared_ptr<const FiniteTableSystem> build_finite_system(
    std::vector<std::string> atoms,
    std::vector<std::pair<std::string, std::string>> entail_pairs,
    FiniteTableSystem::JoinTable join_table);

// Load a finite system from its text format:
//   atom <name>
//   entails <c> <d>
//   join <c> <d> = <e>
// with '#' line comments. The atom set must include "true" and "false".
std::shared_ptr<const FiniteTableSystem> load_finite_system(std::string_view text);
std::shared_ptr<const FiniteTableSystem> load_finite_system_file(const std::string& path);

}  // namespace csltl
