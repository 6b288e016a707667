#include <benchmark/benchmark.h>

#include "csltl/oracle.hpp"
#include "csltl/parser.hpp"
#include "csltl/streams.hpp"
#include "csltl/tableau.hpp"

namespace {

using namespace csltl;

const FlatSystem& flat() {
    static FlatSystem system;
    return system;
}

Formula running_example(bool always_variant) {
    const char* text = always_variant
        ? "(E x. ((`y=1` & X `x=5` & X G `y=1`) | (~`y=1` & X `y=1`)) -> G `y=1`)"
        : "(E x. ((`y=1` & X `x=5` & X F `y=1`) | (~`y=1` & X `y=1`)) -> F `y=1`)";
    return parse_formula(text, flat());
}

void BM_ValidClosed(benchmark::State& state) {
    Formula f = running_example(false);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_valid(f, flat()).valid);
    }
}
BENCHMARK(BM_ValidClosed);

void BM_ValidOpenWithModel(benchmark::State& state) {
    Formula f = running_example(true);
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_valid(f, flat()).countermodel);
    }
}
BENCHMARK(BM_ValidOpenWithModel);

// chains of nested eventualities stress the context rule
void BM_SatEventualityChain(benchmark::State& state) {
    Formula c = Formula::atom(flat().prop("c"));
    Formula f = c;
    for (int i = 0; i < state.range(0); ++i) {
        f = Formula::eventually(Formula::conj(c, Formula::next(f)));
    }
    FormulaSet phi{f, Formula::always(Formula::disj(c, Formula::negate(c)))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(check_sat(phi, flat()).satisfiable);
    }
}
BENCHMARK(BM_SatEventualityChain)->Arg(2)->Arg(4)->Arg(6);

void BM_OracleEnumerate(benchmark::State& state) {
    auto sys = build_finite_system({"true", "false", "p", "q", "pq"},
                                   {{"pq", "p"}, {"pq", "q"}},
                                   {{{"p", "q"}, "pq"}});
    std::vector<Constraint> atoms{sys->atom("p"), sys->atom("q"), sys->atom("pq")};
    OracleBounds bounds;
    bounds.max_prefix = static_cast<std::size_t>(state.range(0));
    bounds.max_cycle = 3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_traces(*sys, atoms, bounds).size());
    }
}
BENCHMARK(BM_OracleEnumerate)->Arg(3)->Arg(4);

void BM_ParseFormula(benchmark::State& state) {
    std::string text =
        "E x. ((`y=1` & X `x=5` & X F `y=1`) | (~`y=1` & X `y=1`))";
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_formula(text, flat()));
    }
}
BENCHMARK(BM_ParseFormula);

void BM_StreamSimplify(benchmark::State& state) {
    Formula f = parse_formula(
        "((`S=[a|S1]` & X `S1=[b|S2]`) & (F `T=[c|T1]` & G `G=[down|G1]`))", flat());
    for (auto _ : state) {
        benchmark::DoNotOptimize(simplify(f));
    }
}
BENCHMARK(BM_StreamSimplify);

}  // namespace

BENCHMARK_MAIN();
