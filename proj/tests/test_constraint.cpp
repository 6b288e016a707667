#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "common.hpp"

using namespace csltl;
using namespace csltl::testing;

TEST_CASE("flat system: entailment basics") {
    const FlatSystem& cs = flat();
    Constraint x1 = cs.eq(Variable{"x"}, "1");
    Constraint y1 = cs.eq(Variable{"y"}, "1");
    Constraint x5 = cs.eq(Variable{"x"}, "5");

    CHECK(cs.entails(cs.join(x1, x1), x1));          // reflexivity through join
    CHECK(cs.entails(cs.join(y1, x5), y1));          // join entails its components
    CHECK(cs.entails(cs.join(y1, x5), x5));
    CHECK_FALSE(cs.entails(y1, x5));
    CHECK(cs.entails(x1, cs.true_c()));
    CHECK(cs.entails(cs.false_c(), x1));
}

TEST_CASE("flat system: conflicting values join to false") {
    const FlatSystem& cs = flat();
    Constraint x1 = cs.eq(Variable{"x"}, "1");
    Constraint x2 = cs.eq(Variable{"x"}, "2");
    CHECK(cs.join(x1, x2) == cs.false_c());
    CHECK(cs.is_false(cs.join(x1, x2)));

    // stream current values never conflict; the modified next operator
    // governs replacement instead
    Constraint sa = cs.stream_cur(Variable{"S"}, "a");
    Constraint sb = cs.stream_cur(Variable{"S"}, "b");
    CHECK_FALSE(cs.is_false(cs.join(sa, sb)));
}

TEST_CASE("flat system: join identity and idempotence") {
    const FlatSystem& cs = flat();
    Constraint y1 = cs.eq(Variable{"y"}, "1");
    CHECK(cs.join(y1, cs.true_c()) == y1);
    CHECK(cs.join(cs.true_c(), y1) == y1);
    CHECK(cs.entails(cs.join(y1, y1), y1));
    CHECK(cs.entails(y1, cs.join(y1, y1)));
}

TEST_CASE("flat system: atom parsing") {
    const FlatSystem& cs = flat();
    CHECK(cs.parse_atom("y=1") == cs.eq(Variable{"y"}, "1"));
    CHECK(cs.parse_atom(" y = 1 ") == cs.eq(Variable{"y"}, "1"));
    CHECK(cs.parse_atom("S=[c|S1]") ==
          cs.stream_cons(Variable{"S"}, "c", Variable{"S1"}));
    CHECK(cs.parse_atom("S~=c") == cs.stream_cur(Variable{"S"}, "c"));
    CHECK(cs.parse_atom("true") == cs.true_c());
    CHECK(cs.parse_atom("false") == cs.false_c());
    CHECK(cs.parse_atom("c") == cs.prop("c"));
    CHECK_THROWS_AS((void)cs.parse_atom("="), Error);
    CHECK_THROWS_AS((void)cs.parse_atom("x=[a"), Error);
}

TEST_CASE("flat system: vars and rename round trip") {
    const FlatSystem& cs = flat();
    Constraint c = cs.join(cs.eq(Variable{"x"}, "1"),
                           cs.stream_cons(Variable{"S"}, "v", Variable{"T"}));
    std::set<Variable> vs = cs.vars(c);
    CHECK(vs == std::set<Variable>{Variable{"x"}, Variable{"S"}, Variable{"T"}});
    CHECK(cs.vars(cs.true_c()).empty());
    CHECK(cs.vars(cs.false_c()).empty());

    Constraint renamed = cs.rename(c, Variable{"x"}, Variable{"z"});
    CHECK(cs.vars(renamed).count(Variable{"z"}) == 1);
    CHECK(cs.rename(renamed, Variable{"z"}, Variable{"x"}) == c);
}

TEST_CASE("foreign constraints are rejected") {
    FlatSystem a;
    FlatSystem b;
    Constraint ca = a.eq(Variable{"x"}, "1");
    CHECK_THROWS_AS((void)b.entails(ca, b.true_c()), Error);
    CHECK_THROWS_AS((void)b.join(ca, b.true_c()), Error);
}

TEST_CASE("finite system: minimal lattice accepted") {
    auto sys = build_finite_system({"true", "false", "a"}, {{"a", "true"}, {"false", "a"}}, {});
    CHECK(sys->entails(sys->atom("a"), sys->true_c()));
    CHECK(sys->entails(sys->false_c(), sys->atom("a")));
    CHECK(sys->join(sys->atom("a"), sys->true_c()) == sys->atom("a"));
}

TEST_CASE("finite system: transitive closure") {
    // pairs {(c,c'), (c',c'')} close to c |- c''; checked against a
    // reachability oracle over the declared pair graph
    std::vector<std::string> atoms{"true", "false", "c", "c1", "c2"};
    std::vector<std::pair<std::string, std::string>> pairs{{"c", "c1"}, {"c1", "c2"}};
    auto sys = build_finite_system(atoms, pairs, {});

    // oracle: BFS over declared edges plus reflexivity and the bounds
    auto reaches = [&](const std::string& from, const std::string& to) {
        if (from == to || to == "true" || from == "false") return true;
        std::set<std::string> seen{from};
        std::vector<std::string> frontier{from};
        while (!frontier.empty()) {
            std::string cur = frontier.back();
            frontier.pop_back();
            if (cur == to) return true;
            for (const auto& [a, b] : pairs) {
                if (a == cur && seen.insert(b).second) frontier.push_back(b);
            }
        }
        return false;
    };
    for (const auto& from : atoms) {
        for (const auto& to : atoms) {
            CAPTURE(from); CAPTURE(to);
            CHECK(sys->entails(sys->atom(from), sys->atom(to)) == reaches(from, to));
        }
    }
    CHECK(sys->entails(sys->atom("c"), sys->atom("c2")));
}

TEST_CASE("finite system: joins match brute-force least upper bounds") {
    auto sys = diamond();
    auto lub = [&](const Constraint& c, const Constraint& d) {
        std::vector<Constraint> ub;
        for (const auto& name : sys->atom_names()) {
            Constraint e = sys->atom(name);
            if (sys->entails(e, c) && sys->entails(e, d)) ub.push_back(e);
        }
        for (const Constraint& u : ub) {
            bool least = true;
            for (const Constraint& v : ub) {
                if (!sys->entails(v, u)) {
                    least = false;
                    break;
                }
            }
            if (least) return u;
        }
        REQUIRE(false);
        return sys->false_c();
    };
    for (const auto& a : sys->atom_names()) {
        for (const auto& b : sys->atom_names()) {
            CAPTURE(a); CAPTURE(b);
            Constraint j = sys->join(sys->atom(a), sys->atom(b));
            Constraint expected = lub(sys->atom(a), sys->atom(b));
            CHECK(sys->entails(j, expected));
            CHECK(sys->entails(expected, j));
        }
    }
    CHECK(sys->join(sys->atom("p"), sys->atom("q")) == sys->atom("pq"));
}

TEST_CASE("finite system: lattice laws hold for every atom") {
    for (auto sys : {chain4(), diamond()}) {
        for (const auto& name : sys->atom_names()) {
            Constraint c = sys->atom(name);
            CHECK(sys->entails(c, sys->true_c()));
            CHECK(sys->entails(sys->false_c(), c));
            for (const auto& other : sys->atom_names()) {
                Constraint d = sys->atom(other);
                Constraint j = sys->join(c, d);
                CHECK(sys->entails(j, c));
                CHECK(sys->entails(j, d));
            }
        }
    }
}

TEST_CASE("finite system: join table violating the lub law is rejected") {
    // join(a,b) = c but c does not entail a
    CHECK_THROWS_AS(build_finite_system({"true", "false", "a", "b", "c"},
                                        {{"c", "b"}},  // c |- b only
                                        {{{"a", "b"}, "c"}}),
                    Error);
    // join entry must be least: false is an upper bound of {a,b} but not the lub
    CHECK_THROWS_AS(build_finite_system({"true", "false", "a", "b", "ab"},
                                        {{"ab", "a"}, {"ab", "b"}},
                                        {{{"a", "b"}, "false"}}),
                    Error);
}

TEST_CASE("finite system: preorders are accepted") {
    // a |- false and false |- a with a != false: mutually entailing tokens
    auto sys = build_finite_system({"true", "false", "a"}, {{"a", "false"}}, {});
    CHECK(sys->entails(sys->atom("a"), sys->false_c()));
    CHECK(sys->entails(sys->false_c(), sys->atom("a")));
    CHECK(sys->is_false(sys->atom("a")));
}

TEST_CASE("finite system: missing true/false and unknown atoms") {
    CHECK_THROWS_AS(build_finite_system({"true", "a"}, {}, {}), Error);
    CHECK_THROWS_AS(build_finite_system({"true", "false"}, {{"true", "zzz"}}, {}), Error);
    auto sys = chain4();
    CHECK_THROWS_AS((void)sys->atom("nope"), Error);
}

TEST_CASE("finite system: text format loader") {
    auto sys = load_finite_system(R"(
# comment line
atom true
atom false
atom a
atom b
entails a b   # trailing comment
join a b = a
)");
    CHECK(sys->size() == 4);
    CHECK(sys->entails(sys->atom("a"), sys->atom("b")));
    CHECK(sys->join(sys->atom("a"), sys->atom("b")) == sys->atom("a"));

    CHECK_THROWS_AS(load_finite_system("atom true\natom false\nfrobnicate x"), ParseError);
    CHECK_THROWS_AS(load_finite_system("atom true\natom false\nentails true"), ParseError);
}
