#pragma once

#include <string>

#include <json.hpp>

#include "csltl/tableau.hpp"

namespace csltl {

// GraphViz rendering in the usual proof-tree style: one box per node listing
// its formulas, x under closed leaves, an encircled dot under open ones,
// edges labeled with the rule family that produced the child.
std::string to_dot(const Tableau& tableau);

// Stable JSON form: nodes with label strings, rule tags, marks, branches,
// verdict and counts. Key order and field contents are deterministic.
nlohmann::ordered_json tableau_to_json(const Tableau& tableau);

nlohmann::ordered_json trace_to_json(const ConditionalTrace& trace);

}  // namespace csltl
