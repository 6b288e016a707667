#include "csltl/render.hpp"

#include <sstream>

namespace csltl {

namespace {

const char* edge_label(RuleTag tag) {
    switch (tag) {
        case RuleTag::R1:
        case RuleTag::R2:
            return "α";
        case RuleTag::R3:
        case RuleTag::R4:
        case RuleTag::R5:
        case RuleTag::R6:
            return "β";
        case RuleTag::Exists:
            return "∃";
        case RuleTag::NextStep:
            return "X";
    }
    return "?";
}

std::string escape(const std::string& text) {
    std::string out;
    for (char ch : text) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

std::string node_text(const TableauNode& n) {
    std::string out;
    bool first = true;
    for (const Formula& f : n.label.formulas) {
        if (!first) out += ", ";
        first = false;
        out += f.to_string();
    }
    if (n.label.distinguished) out += "  ‹" + n.label.distinguished->to_string() + "›";
    switch (n.mark) {
        case NodeMark::Closed: out += "\\n×"; break;
        case NodeMark::Open: out += "\\n⊙"; break;
        case NodeMark::Unmarked: break;
    }
    return out;
}

const char* mark_name(NodeMark mark) {
    switch (mark) {
        case NodeMark::Unmarked: return "unmarked";
        case NodeMark::Closed: return "closed";
        case NodeMark::Open: return "open";
    }
    return "?";
}

}  // namespace

std::string to_dot(const Tableau& tableau) {
    std::ostringstream out;
    out << "digraph tableau {\n";
    out << "  node [shape=box, fontname=\"monospace\"];\n";
    for (const TableauNode& n : tableau.nodes) {
        out << "  n" << n.id << " [label=\"" << escape(node_text(n)) << "\"";
        if (n.mark == NodeMark::Closed) out << ", color=red";
        if (n.mark == NodeMark::Open) out << ", color=darkgreen";
        out << "];\n";
    }
    for (const TableauNode& n : tableau.nodes) {
        for (NodeId child : n.children) {
            out << "  n" << n.id << " -> n" << child << " [label=\""
                << (n.rule ? edge_label(*n.rule) : "") << "\"];\n";
        }
        if (n.cycle_ancestor) {
            out << "  n" << n.id << " -> n" << *n.cycle_ancestor
                << " [style=dashed, label=\"cycle\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

nlohmann::ordered_json tableau_to_json(const Tableau& tableau) {
    nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
    for (const TableauNode& n : tableau.nodes) {
        nlohmann::ordered_json labels = nlohmann::ordered_json::array();
        for (const Formula& f : n.label.formulas) labels.push_back(f.to_string());
        nlohmann::ordered_json node{
            {"id", n.id},
            {"label", std::move(labels)},
            {"mark", mark_name(n.mark)},
            {"stage", n.stage},
            {"children", n.children},
        };
        if (n.label.distinguished) {
            node["distinguished"] = n.label.distinguished->to_string();
        }
        if (n.rule) node["rule"] = to_string(*n.rule);
        if (n.cycle_ancestor) node["cycle_ancestor"] = *n.cycle_ancestor;
        nodes.push_back(std::move(node));
    }
    nlohmann::ordered_json branches = nlohmann::ordered_json::array();
    for (const auto& b : tableau.branches) branches.push_back(b);
    nlohmann::ordered_json out{
        {"verdict", tableau.verdict == TableauVerdict::Closed ? "closed" : "open"},
        {"root", tableau.root},
        {"node_count", tableau.nodes.size()},
        {"branch_count", tableau.branches.size()},
        {"nodes", std::move(nodes)},
        {"branches", std::move(branches)},
    };
    if (tableau.witness_branch) out["witness_branch"] = *tableau.witness_branch;
    return out;
}

nlohmann::ordered_json trace_to_json(const ConditionalTrace& trace) {
    auto states = [](const std::vector<CondState>& list) {
        nlohmann::ordered_json out = nlohmann::ordered_json::array();
        for (const CondState& s : list) {
            switch (s.kind) {
                case CondState::Kind::Store: {
                    nlohmann::ordered_json negatives = nlohmann::ordered_json::array();
                    for (const Constraint& c : s.negative) negatives.push_back(c.to_string());
                    out.push_back({{"positive", s.positive.to_string()},
                                   {"negative", std::move(negatives)},
                                   {"store", s.store.to_string()}});
                    break;
                }
                case CondState::Kind::Stutt: {
                    nlohmann::ordered_json negatives = nlohmann::ordered_json::array();
                    for (const Constraint& c : s.negative) negatives.push_back(c.to_string());
                    out.push_back({{"stutt", std::move(negatives)}});
                    break;
                }
                case CondState::Kind::End:
                    out.push_back({{"end", true}});
                    break;
            }
        }
        return out;
    };
    return nlohmann::ordered_json{{"prefix", states(trace.prefix)},
                                  {"cycle", states(trace.cycle)}};
}

}  // namespace csltl
