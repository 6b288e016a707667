#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "common.hpp"
#include "csltl/parser.hpp"
#include "csltl/tccp.hpp"

using namespace csltl;
using namespace csltl::testing;

TEST_CASE("parse_formula basics") {
    const FlatSystem& cs = flat();
    CHECK(parse_formula("true", cs) == Formula::truth());
    CHECK(parse_formula("false", cs) == Formula::falsity());
    CHECK(parse_formula("`y=1`", cs) == feq("y", "1"));
    CHECK(parse_formula("~`y=1`", cs) == Formula::negate(feq("y", "1")));
    CHECK(parse_formula("X `y=1`", cs) == Formula::next(feq("y", "1")));
    CHECK(parse_formula("F `y=1`", cs) == Formula::eventually(feq("y", "1")));
    CHECK(parse_formula("(`a` U `b`)", cs) == Formula::until(fprop("a"), fprop("b")));
    CHECK(parse_formula("(`a` & `b` & `c`)", cs) ==
          Formula::conj(fprop("a"), Formula::conj(fprop("b"), fprop("c"))));
    CHECK(parse_formula("(`a` | `b`)", cs) == Formula::disj(fprop("a"), fprop("b")));
    CHECK(parse_formula("(`a` -> `b`)", cs) == Formula::implies(fprop("a"), fprop("b")));
    CHECK(parse_formula("E x. `x=5`", cs) ==
          Formula::exists(Variable{"x"}, feq("x", "5")));
    CHECK(parse_formula("`S=[c|S1]`", cs) == fcons("S", "c", "S1"));
    CHECK(parse_formula("`S~=c`", cs) == fcur("S", "c"));
    // comments and whitespace
    CHECK(parse_formula("# heading\n  X `y=1`  # trailing\n", cs) ==
          Formula::next(feq("y", "1")));
}

TEST_CASE("G expands definitionally") {
    const FlatSystem& cs = flat();
    // G ~`y=1` is ~(true U ~~(y=1))
    Formula got = parse_formula("G ~`y=1`", cs);
    Formula expected = Formula::raw_not(Formula::until(
        Formula::truth(), Formula::raw_not(Formula::negate(feq("y", "1")))));
    CHECK(got == expected);
    CHECK(got == Formula::always(Formula::negate(feq("y", "1"))));
}

TEST_CASE("parse_formula of the running example's semantics") {
    const FlatSystem& cs = flat();
    Formula got = parse_formula(
        "E x. ((`y=1` & X `x=5` & X F `y=1`) | (~`y=1` & X `y=1`))", cs);

    Formula left = Formula::conj(
        feq("y", "1"), Formula::conj(Formula::next(feq("x", "5")),
                                     Formula::next(Formula::eventually(feq("y", "1")))));
    Formula right = Formula::conj(Formula::negate(feq("y", "1")),
                                  Formula::next(feq("y", "1")));
    CHECK(got == Formula::exists(Variable{"x"}, Formula::disj(left, right)));
}

TEST_CASE("parse_formula errors carry positions") {
    const FlatSystem& cs = flat();
    CHECK_THROWS_AS((void)parse_formula("(`a` &", cs), ParseError);
    CHECK_THROWS_AS((void)parse_formula("(`a` & `b` | `c`)", cs), ParseError);
    CHECK_THROWS_AS((void)parse_formula("", cs), ParseError);
    CHECK_THROWS_AS((void)parse_formula("X", cs), ParseError);
    CHECK_THROWS_AS((void)parse_formula("`y=1` `y=1`", cs), ParseError);
    try {
        (void)parse_formula("\n\n   ?", cs);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() == 4);
    }
}

TEST_CASE("unknown atoms are reported against table systems") {
    auto sys = chain4();
    CHECK(parse_formula("`a`", *sys) == Formula::atom(sys->atom("a")));
    try {
        (void)parse_formula("`zzz`", *sys);
        FAIL("expected an unknown-atom error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownAtom);
    }
}

TEST_CASE("round trip: parse after print is the identity") {
    const FlatSystem& cs = flat();
    std::vector<Constraint> alphabet{
        cs.eq(Variable{"y"}, "1"), cs.prop("c"),
        cs.stream_cur(Variable{"S"}, "a"),
        cs.stream_cons(Variable{"S"}, "a", Variable{"S1"}),
    };
    FormulaGen gen(101, alphabet, 4);
    for (int i = 0; i < 500; ++i) {
        Formula f = gen();
        CAPTURE(f.to_string());
        CHECK(parse_formula(f.to_string(), cs) == f);
    }
    // quantified formulas round trip as well
    Formula ex = Formula::exists(
        Variable{"x"}, Formula::disj(feq("x", "5"), Formula::always(feq("y", "1"))));
    CHECK(parse_formula(ex.to_string(), cs) == ex);
}

TEST_CASE("parse_program of the running example") {
    const FlatSystem& cs = flat();
    Program program = parse_program(
        "p(y) :- exists x (now `y=1` then (tell `x=5` || p(y)) else tell `y=1`).", cs);
    REQUIRE(program.declarations().size() == 1);
    const Declaration& d = program.declarations()[0];
    CHECK(d.name == "p");
    CHECK(d.params == std::vector<Variable>{Variable{"y"}});

    const Agent& body = d.body;
    REQUIRE(body.kind() == AgentKind::Hide);
    CHECK(body.bound_var() == Variable{"x"});
    const Agent& now = body.first();
    REQUIRE(now.kind() == AgentKind::Now);
    CHECK(now.constraint() == cs.eq(Variable{"y"}, "1"));
    REQUIRE(now.first().kind() == AgentKind::Par);
    CHECK(now.first().first().kind() == AgentKind::Tell);
    CHECK(now.first().first().constraint() == cs.eq(Variable{"x"}, "5"));
    REQUIRE(now.first().second().kind() == AgentKind::Call);
    CHECK(now.first().second().process() == "p");
    CHECK(now.first().second().args() == std::vector<Variable>{Variable{"y"}});
    REQUIRE(now.second().kind() == AgentKind::Tell);
    CHECK(now.second().constraint() == cs.eq(Variable{"y"}, "1"));
}

TEST_CASE("parse_program: choice, skip, nesting") {
    const FlatSystem& cs = flat();
    Program program = parse_program(
        "worker(s) :- ask `s=go` -> tell `s=run` + ask `s=stop` -> skip.\n"
        "main(s) :- (worker(s) || tell `s=go`).",
        cs);
    REQUIRE(program.declarations().size() == 2);
    const Agent& choice = program.declarations()[0].body;
    REQUIRE(choice.kind() == AgentKind::Choice);
    CHECK(choice.branches().size() == 2);
    CHECK(choice.branches()[0].guard == cs.eq(Variable{"s"}, "go"));
    CHECK(choice.branches()[1].body.kind() == AgentKind::Skip);
}

TEST_CASE("parse_program: empty input and closure errors") {
    const FlatSystem& cs = flat();
    Program empty = parse_program("", cs);
    CHECK(empty.empty());
    CHECK(diagnose(empty, Interpretation{}, cs).empty());

    CHECK_THROWS_AS((void)parse_program("p(y) :- q(y).", cs), Error);
    CHECK_THROWS_AS((void)parse_program("p(y) :- p(y,z).", cs), Error);
    CHECK_THROWS_AS((void)parse_program("p(y) : tell `y=1`.", cs), ParseError);
}

TEST_CASE("parse_spec") {
    const FlatSystem& cs = flat();
    Interpretation spec = parse_spec("p(y) |= F `y=1`.\nq(a,b) |= true.", cs);
    CHECK(spec.defines(ProcessKey{"p", 1}));
    CHECK(spec.defines(ProcessKey{"q", 2}));
    CHECK(spec.lookup("p", {Variable{"y"}}) == Formula::eventually(feq("y", "1")));
    // positional renaming on lookup
    CHECK(spec.lookup("p", {Variable{"z"}}) == Formula::eventually(feq("z", "1")));

    CHECK_THROWS_AS((void)parse_spec("p(y) |= E x. `x=5`.", cs), Error);
    CHECK_THROWS_AS((void)parse_spec("p(y) |= F `y=1`", cs), ParseError);
}
