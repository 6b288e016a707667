// csltl — satisfiability, validity and program diagnosis for constraint LTL.
//
// Subcommands:
//   sat <formula-file>         satisfiability of a formula
//   valid <formula-file>       validity of a formula
//   diagnose <program> <spec>  per-process behaviour check
//
// Exit codes follow verification-tool convention: 0 the property holds
// (valid / correct / satisfiable as requested), 1 it does not, 2 usage or
// parse error, 3 node budget exceeded.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "csltl/oracle.hpp"
#include "csltl/parser.hpp"
#include "csltl/render.hpp"
#include "csltl/streams.hpp"
#include "csltl/tableau.hpp"
#include "csltl/tccp.hpp"

namespace {

using nlohmann::ordered_json;

struct SessionConfig {
    std::string system_file;  // empty: builtin flat system
    bool stream_mode = false;
    std::uint64_t node_budget = 1'000'000;
    std::string format = "text";
    std::string dot_file;
    bool oracle_check = false;
    bool uncovered = false;
    csltl::OracleBounds oracle_bounds;
};

std::shared_ptr<const csltl::ConstraintSystem> make_system(const SessionConfig& config) {
    if (config.system_file.empty()) return std::make_shared<csltl::FlatSystem>();
    return csltl::load_finite_system_file(config.system_file);
}

void add_session_flags(CLI::App* cmd, SessionConfig& config) {
    cmd->add_option("--system", config.system_file,
                    "finite constraint system file (default: builtin flat system)");
    cmd->add_flag("--streams", config.stream_mode,
                  "simplify stream constraints and use the modified next operator");
    cmd->add_option("--budget", config.node_budget, "tableau node budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", config.format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--dot", config.dot_file, "also write the tableau as GraphViz DOT");
    cmd->add_flag("--oracle-check", config.oracle_check,
                  "cross-verify the verdict with the bounded trace oracle");
    cmd->add_option("--oracle-prefix", config.oracle_bounds.max_prefix,
                    "oracle bound: maximum prefix length");
    cmd->add_option("--oracle-cycle", config.oracle_bounds.max_cycle,
                    "oracle bound: maximum cycle length");
    cmd->add_option("--oracle-max", config.oracle_bounds.max_traces,
                    "oracle bound: enumeration cap");
}

void write_dot(const std::string& path, const csltl::Tableau& tableau) {
    std::ofstream out(path);
    if (!out) throw csltl::Error(csltl::ErrorKind::Parse, "cannot write '" + path + "'");
    out << csltl::to_dot(tableau);
}

// Bounded cross-check of a satisfiability verdict for the given formula set.
ordered_json oracle_report(const csltl::FormulaSet& formulas,
                           const csltl::ConstraintSystem& cs, bool satisfiable,
                           const std::optional<csltl::ConditionalTrace>& model,
                           const csltl::OracleBounds& bounds) {
    csltl::FormulaSet stripped = csltl::strip_positive_exists(formulas);
    ordered_json report;
    if (satisfiable) {
        bool confirmed = csltl::eval_all(*model, stripped, cs);
        report["mode"] = "model-validation";
        report["agrees"] = confirmed;
    } else {
        auto verdict = csltl::oracle_sat(stripped, cs, csltl::collect_atoms(stripped), bounds);
        report["mode"] = "bounded-search";
        report["agrees"] = !verdict.found();
        report["prefix_bound"] = bounds.max_prefix;
        report["cycle_bound"] = bounds.max_cycle;
    }
    return report;
}

int emit(const SessionConfig& config, ordered_json report, int exit_code,
         const std::string& text) {
    if (config.format == "json") {
        report["exit_code"] = exit_code;
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << text;
    }
    return exit_code;
}

int run_sat(const std::string& path, const SessionConfig& config, bool as_validity) {
    auto started = std::chrono::steady_clock::now();
    auto system = make_system(config);
    const csltl::ConstraintSystem& cs = *system;

    csltl::Formula f = csltl::parse_formula(csltl::read_file(path), cs);
    csltl::Formula goal = as_validity ? csltl::Formula::negate(f) : f;
    if (config.stream_mode) goal = csltl::simplify(goal);

    csltl::TableauOptions opts;
    opts.stream_mode = config.stream_mode;
    opts.node_budget = config.node_budget;

    csltl::FormulaSet set{goal};
    csltl::SatResult result = csltl::check_sat(set, cs, opts);
    if (!config.dot_file.empty()) write_dot(config.dot_file, result.tableau);

    bool holds = as_validity ? !result.satisfiable : result.satisfiable;
    const char* verdict = as_validity ? (holds ? "valid" : "not-valid")
                                      : (holds ? "sat" : "unsat");

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();

    ordered_json report{{"command", as_validity ? "valid" : "sat"},
                        {"verdict", verdict},
                        {"tableau",
                         {{"node_count", result.tableau.nodes.size()},
                          {"branch_count", result.tableau.branches.size()}}}};
    std::string text = std::string(verdict) + "\n";
    if (result.model) {
        report["witness"] = csltl::trace_to_json(*result.model);
        text += (as_validity ? "countermodel: " : "model: ") + result.model->to_string() + "\n";
    }
    if (config.oracle_check) {
        report["oracle_check"] =
            oracle_report(set, cs, result.satisfiable, result.model, config.oracle_bounds);
        bool agrees = report["oracle_check"]["agrees"].get<bool>();
        text += std::string("oracle check: ") + (agrees ? "agrees" : "DISAGREES") + "\n";
        if (!agrees) std::cerr << "warning: oracle disagrees with the tableau verdict\n";
    }
    report["elapsed_ms"] = elapsed;
    return emit(config, std::move(report), holds ? 0 : 1, text);
}

int run_diagnose(const std::string& program_path, const std::string& spec_path,
                 const SessionConfig& config) {
    auto started = std::chrono::steady_clock::now();
    auto system = make_system(config);
    const csltl::ConstraintSystem& cs = *system;

    csltl::Program program = csltl::parse_program(csltl::read_file(program_path), cs);
    csltl::Interpretation spec = csltl::parse_spec(csltl::read_file(spec_path), cs);

    csltl::TableauOptions opts;
    opts.stream_mode = config.stream_mode;
    opts.node_budget = config.node_budget;

    auto results = csltl::diagnose(program, spec, cs, opts);
    std::vector<csltl::UncoveredHint> hints;
    if (config.uncovered) hints = csltl::uncovered_hint(program, spec, cs, opts);

    bool all_correct = true;
    ordered_json processes = ordered_json::array();
    std::string text;
    for (const auto& r : results) {
        bool correct = r.verdict == csltl::ProcessVerdict::Correct;
        all_correct = all_correct && correct;
        ordered_json entry{{"process", r.process.to_string()},
                           {"verdict", correct ? "correct" : "warning"},
                           {"tableau",
                            {{"node_count", r.tableau.nodes.size()},
                             {"branch_count", r.tableau.branches.size()}}}};
        text += r.process.to_string() + ": " +
                (correct ? "correct" : "warning (possible incorrectness)") + "\n";
        if (r.countermodel) {
            entry["witness"] = csltl::trace_to_json(*r.countermodel);
            text += "  countermodel: " + r.countermodel->to_string() + "\n";
        }
        if (config.oracle_check) {
            csltl::FormulaSet negated{csltl::Formula::negate(r.checked)};
            entry["oracle_check"] = oracle_report(negated, cs, !correct, r.countermodel,
                                                  config.oracle_bounds);
        }
        if (!config.dot_file.empty()) {
            std::string path = config.dot_file;
            if (results.size() > 1) {
                auto dot = path.rfind(".dot");
                std::string stem = dot == std::string::npos ? path : path.substr(0, dot);
                path = stem + "." + r.process.name + ".dot";
            }
            write_dot(path, r.tableau);
        }
        processes.push_back(std::move(entry));
    }
    for (const auto& h : hints) {
        for (auto& entry : processes) {
            if (entry["process"] == h.process.to_string()) {
                entry["uncovered_hint"] =
                    ordered_json{{"heuristic", true},
                                 {"no_uncovered_detected", h.no_uncovered_detected}};
            }
        }
        text += h.process.to_string() + ": uncovered hint (heuristic): " +
                (h.no_uncovered_detected ? "no uncovered behaviour detected"
                                         : "possible uncovered behaviour") +
                "\n";
    }

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    ordered_json report{{"command", "diagnose"},
                        {"verdict", all_correct ? "correct" : "warning"},
                        {"processes", std::move(processes)},
                        {"elapsed_ms", elapsed}};
    text = std::string(all_correct ? "correct" : "warning") + "\n" + text;
    return emit(config, std::move(report), all_correct ? 0 : 1, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tableau decision engine for constraint system LTL"};
    app.require_subcommand(1);

    SessionConfig config;
    std::string formula_file;
    std::string program_file;
    std::string spec_file;

    CLI::App* sat = app.add_subcommand("sat", "check satisfiability of a formula");
    sat->add_option("formula-file", formula_file, "file with one formula")->required();
    add_session_flags(sat, config);

    CLI::App* valid = app.add_subcommand("valid", "check validity of a formula");
    valid->add_option("formula-file", formula_file, "file with one formula")->required();
    add_session_flags(valid, config);

    CLI::App* diagnose = app.add_subcommand("diagnose", "check a program against a specification");
    diagnose->add_option("program", program_file, "process declarations")->required();
    diagnose->add_option("spec", spec_file, "per-process specification")->required();
    diagnose->add_flag("--uncovered-hint", config.uncovered,
                       "also run the heuristic reverse check");
    add_session_flags(diagnose, config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sat->parsed()) return run_sat(formula_file, config, false);
        if (valid->parsed()) return run_sat(formula_file, config, true);
        return run_diagnose(program_file, spec_file, config);
    } catch (const csltl::BudgetExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const csltl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
