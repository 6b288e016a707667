// End-to-end checks of the command line tool: exit codes, the JSON report
// against golden files, DOT emission, session flags.
//
// usage: test_cli <path-to-cli-binary>

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_cli;
const std::string kTestdata = CSLTL_TESTDATA_DIR;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    std::string out_path = std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") +
                           "/csltl_cli_out.txt";
    std::string cmd = g_cli + " " + args + " > " + out_path + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = status < 0 ? -1 : (WIFEXITED(status) ? WEXITSTATUS(status) : -1);
    std::ifstream in(out_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.stdout_text = buf.str();
    std::remove(out_path.c_str());
    return r;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

// timing varies run to run; everything else must match the golden byte for byte
void check_against_golden(const std::string& got_text, const std::string& golden_path) {
    nlohmann::json got = nlohmann::json::parse(got_text);
    nlohmann::json expected = load_json(golden_path);
    got["elapsed_ms"] = 0;
    expected["elapsed_ms"] = 0;
    CHECK(got == expected);
}

}  // namespace

TEST_CASE("exit codes follow the verification convention") {
    CHECK(run("valid " + kTestdata + "/taut.f").exit_code == 0);
    CHECK(run("valid " + kTestdata + "/fig1.f").exit_code == 0);
    CHECK(run("valid " + kTestdata + "/fig2.f").exit_code == 1);
    CHECK(run("diagnose " + kTestdata + "/simple.tccp " + kTestdata +
              "/spec_eventually.spec")
              .exit_code == 0);
    CHECK(run("diagnose " + kTestdata + "/simple.tccp " + kTestdata +
              "/spec_always.spec")
              .exit_code == 1);
}

TEST_CASE("sat subcommand") {
    CHECK(run("sat " + kTestdata + "/taut.f").exit_code == 0);
    // a contradiction: exit 1
    std::string path = kTestdata + "/unsat_tmp.f";
    {
        std::ofstream out(path);
        out << "(`c` & ~`c`)\n";
    }
    CHECK(run("sat " + path).exit_code == 1);
    std::remove(path.c_str());
}

TEST_CASE("usage and parse errors exit 2") {
    CHECK(run("").exit_code == 2);
    CHECK(run("valid /nonexistent/file.f").exit_code == 2);
    std::string path = kTestdata + "/broken_tmp.f";
    {
        std::ofstream out(path);
        out << "(`a` &\n";
    }
    CHECK(run("valid " + path).exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("budget exhaustion exits 3") {
    CHECK(run("valid " + kTestdata + "/fig1.f --budget 3").exit_code == 3);
}

TEST_CASE("json report matches the golden files") {
    RunResult valid = run("valid " + kTestdata + "/taut.f --format json");
    CHECK(valid.exit_code == 0);
    check_against_golden(valid.stdout_text, kTestdata + "/golden_valid_taut.json");

    RunResult diag = run("diagnose " + kTestdata + "/simple.tccp " + kTestdata +
                         "/spec_always.spec --format json");
    CHECK(diag.exit_code == 1);
    check_against_golden(diag.stdout_text, kTestdata + "/golden_diagnose_always.json");
}

TEST_CASE("oracle cross-check reports agreement") {
    RunResult r = run("valid " + kTestdata + "/fig1.f --format json --oracle-check "
                      "--oracle-prefix 3 --oracle-cycle 2");
    CHECK(r.exit_code == 0);
    nlohmann::json report = nlohmann::json::parse(r.stdout_text);
    REQUIRE(report.contains("oracle_check"));
    CHECK(report["oracle_check"]["agrees"] == true);
    CHECK(report["oracle_check"]["mode"] == "bounded-search");

    RunResult sat = run("valid " + kTestdata + "/fig2.f --format json --oracle-check");
    CHECK(sat.exit_code == 1);
    nlohmann::json sat_report = nlohmann::json::parse(sat.stdout_text);
    CHECK(sat_report["oracle_check"]["agrees"] == true);
    CHECK(sat_report["oracle_check"]["mode"] == "model-validation");
}

TEST_CASE("dot emission") {
    std::string dot_path = kTestdata + "/fig2_tmp.dot";
    RunResult r = run("valid " + kTestdata + "/fig2.f --dot " + dot_path);
    CHECK(r.exit_code == 1);
    std::ifstream in(dot_path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string dot = buf.str();
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("⊙") != std::string::npos);  // the open leaf
    CHECK(dot.find("×") != std::string::npos);  // a closed leaf
    CHECK(dot.find("label=\"∃\"") != std::string::npos);
    CHECK(dot.find("label=\"X\"") != std::string::npos);
    std::remove(dot_path.c_str());
}

TEST_CASE("finite table systems through --system") {
    std::string path = kTestdata + "/table_tmp.f";
    {
        std::ofstream out(path);
        out << "(`a` -> `b`)\n";  // a entails b in chain4
    }
    CHECK(run("valid " + path + " --system " + kTestdata + "/chain4.sys").exit_code == 0);
    {
        std::ofstream out(path);
        out << "(`b` -> `a`)\n";
    }
    CHECK(run("valid " + path + " --system " + kTestdata + "/chain4.sys").exit_code == 1);
    // unknown atom against the table
    {
        std::ofstream out(path);
        out << "`zzz`\n";
    }
    CHECK(run("sat " + path + " --system " + kTestdata + "/chain4.sys").exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("stream mode") {
    std::string path = kTestdata + "/stream_tmp.f";
    {
        std::ofstream out(path);
        out << "(`S=[a|S1]` & X `S1=[b|S2]`)\n";
    }
    CHECK(run("sat " + path + " --streams").exit_code == 0);
    CHECK(run("sat " + path).exit_code == 0);
    std::remove(path.c_str());
}

int main(int argc, char** argv) {
    doctest::Context context;
    int arg_end = argc;
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_cli = argv[argc - 1];
        arg_end = argc - 1;
    } else {
        g_cli = "./build/tools/csltl";
    }
    context.applyCommandLine(arg_end, argv);
    return context.run();
}
