#pragma once

#include <string>
#include <string_view>

#include "csltl/formula.hpp"
#include "csltl/tccp.hpp"

namespace csltl {

// Concrete formula syntax:
//
//   true  false  ~f  (f & g)  (f | g)  (f -> g)  X f  (f U g)  F f  G f  E x. f
//
// with atoms in backticks, resolved by the active constraint system:
// `y=1`, `S=[c|S1]`, `S~=c`. Binary operators always sit inside parentheses;
// chains of one operator associate to the right. '#' starts a line comment.
Formula parse_formula(std::string_view text, const ConstraintSystem& cs);

// Process declarations:
//
//   p(y) :- exists x (now `y=1` then (tell `x=5` || p(y)) else tell `y=1`).
//
// Agents: skip, tell `c`, ask `c` -> A + ask `c'` -> A', now `c` then A
// else A, A || A, exists x A, p(x,...). Calls must resolve against the
// declared processes.
Program parse_program(std::string_view text, const ConstraintSystem& cs);

// Specifications, one process per line:
//
//   p(y) |= F `y=1`.
//
// Quantifiers are rejected (a specification talks about visible behaviour).
Interpretation parse_spec(std::string_view text, const ConstraintSystem& cs);

std::string read_file(const std::string& path);

}  // namespace csltl
