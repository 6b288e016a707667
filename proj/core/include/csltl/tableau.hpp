#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "csltl/formula.hpp"
#include "csltl/trace.hpp"

namespace csltl {

// ── Labels ───────────────────────────────────────────────────────────────────
//
// A node label: a formula set plus at most one distinguished eventuality.
// The distinguished formula is always an Until formula; it sits in the set
// either bare or wrapped in a next formula (rule R6 re-distinguishes the
// Until inside the next formula it creates, and the next operator unwraps
// it at the stage boundary).

struct Label {
    FormulaSet formulas;
    std::optional<Formula> distinguished;

    bool operator==(const Label& other) const {
        return formulas == other.formulas && distinguished == other.distinguished;
    }

    // distinguished is an Until formula, and it or its next-wrapping is a member
    bool well_formed() const;

    std::string to_string() const;
};

// ── Tableau tree ─────────────────────────────────────────────────────────────

enum class RuleTag : std::uint8_t { R1, R2, R3, R4, R5, R6, Exists, NextStep };

const char* to_string(RuleTag tag);

enum class NodeMark : std::uint8_t { Unmarked, Closed, Open };

using NodeId = std::uint32_t;

struct TableauNode {
    NodeId id = 0;
    Label label;
    std::optional<NodeId> parent;
    std::vector<NodeId> children;
    NodeMark mark = NodeMark::Unmarked;
    std::optional<RuleTag> rule;  // rule that produced the children
    std::uint32_t stage = 0;      // stage index along the branch

    // Set when the node was marked open by the cycle point: the oldest
    // ancestor carrying the same label.
    std::optional<NodeId> cycle_ancestor;

    // Per-branch fairness bookkeeping: for each eventuality seen bare in this
    // branch, (formula, first-seen tick, last-distinguished tick or 0).
    struct FairnessEntry {
        Formula eventuality;
        std::uint64_t first_seen = 0;
        std::uint64_t last_distinguished = 0;
    };
    std::vector<FairnessEntry> fairness;
};

enum class TableauVerdict : std::uint8_t { Closed, Open };

struct Tableau {
    std::vector<TableauNode> nodes;
    NodeId root = 0;
    std::vector<std::vector<NodeId>> branches;  // maximal root-to-leaf paths
    TableauVerdict verdict = TableauVerdict::Closed;
    std::optional<std::size_t> witness_branch;  // open verdicts carry one

    const TableauNode& node(NodeId id) const { return nodes[id]; }
    std::vector<NodeId> path_to(NodeId id) const;
};

struct TableauOptions {
    bool stream_mode = false;
    std::uint64_t node_budget = 1'000'000;
    // Stop expanding once one open branch is found. A fully expanded tableau
    // marks every branch; for the verdict the first fulfilled open branch
    // suffices and the remaining leaves stay Unmarked.
    bool stop_on_first_open = true;
};

// Thrown when the node budget is hit; carries the partial tableau.
class BudgetExceededError : public Error {
public:
    explicit BudgetExceededError(std::shared_ptr<const Tableau> partial)
        : Error(ErrorKind::BudgetExceeded, "tableau node budget exceeded"),
          partial_(std::move(partial)) {}

    const std::shared_ptr<const Tableau>& partial() const noexcept { return partial_; }

private:
    std::shared_ptr<const Tableau> partial_;
};

// ── Rules ────────────────────────────────────────────────────────────────────

// A label is inconsistent when it contains some f together with ~f, the
// constant false, or when the join of all its positive constraint atoms is
// false or entails some negated constraint atom.
bool is_inconsistent(const Label& label, const ConstraintSystem& cs);

// R1 (~~f => f) and R2 (f & g => f, g). f must be an alpha formula in label.
Label apply_alpha(const Label& label, const Formula& f);

// R3/R4 for negated conjunctions and negated Untils; R5/R6 for Untils.
// use_context selects R6 and is only legal when f is (or becomes) the
// distinguished eventuality; the B2 child of R6 distinguishes the Until
// inside the next formula it creates.
std::pair<Label, Label> apply_beta(const Label& label, const Formula& f,
                                   bool use_context);

// Quantifier elimination: E x. g is replaced by g, renaming x to `fresh`
// first when x occurs free in the rest of the label.
Label apply_exists(const Label& label, const Formula& f, const Variable& fresh);

// The next operator: unwrap next formulas and carry positive constraint
// atoms forward (negated constraints die at the stage boundary). In stream
// mode a current-value atom S~=c survives only when no X(S~=c') with a
// different c' is present, and such atoms are excluded from the plain
// propagation clause.
Label next_label(const Label& label, bool stream_mode);

// cntx(gamma): the disjunction of the negations of gamma's members, double
// negations collapsed, in canonical set order (right fold).
Formula context_of(const FormulaSet& gamma);

// Deterministic choice: first alpha formula in canonical order, else first
// exists formula, else the distinguished eventuality when selectable, else
// the first beta formula preferring non-eventualities. Empty when the label
// is fully elementary.
std::optional<Formula> select_formula(const Label& label);

// ── Construction and verdicts ────────────────────────────────────────────────

Tableau build_tableau(const FormulaSet& formulas, const ConstraintSystem& cs,
                      const TableauOptions& opts = {});

struct SatResult {
    bool satisfiable = false;
    std::optional<ConditionalTrace> model;  // present on Sat
    Tableau tableau;
};

SatResult check_sat(const FormulaSet& formulas, const ConstraintSystem& cs,
                    const TableauOptions& opts = {});

struct ValidityResult {
    bool valid = false;
    std::optional<ConditionalTrace> countermodel;  // present on NotValid
    Tableau tableau;
};

// Valid iff {~f} is unsatisfiable; the countermodel is the open branch model.
ValidityResult check_valid(const Formula& f, const ConstraintSystem& cs,
                           const TableauOptions& opts = {});

// Model extraction from an open branch: one conditional store per stage whose
// positive condition and store are the join of the stage's positive constraint
// atoms (the empty join is true). Branches opened by the cycle point yield
// the corresponding lasso; all-constraint open leaves replicate the final
// store as a singleton cycle.
ConditionalTrace extract_model(const Tableau& tableau, std::size_t branch_index,
                               const ConstraintSystem& cs);

// Stage labels along a branch (union of node labels per stage), in order.
std::vector<FormulaSet> stage_labels(const Tableau& tableau,
                                     const std::vector<NodeId>& branch);

}  // namespace csltl
