#include "doctest.h"
#include "rulemon/engine.hpp"
#include "rulemon/mapsem.hpp"
#include "rulemon/traceio.hpp"

using namespace rulemon;

TEST_CASE("map: initial state of a disjunction with strong next") {
    RuleSystem sys = compile_formula("a | X b");
    Engine engine(sys);
    MonitorState state = engine.initial_state();
    JudgementPtr j = simplify(*map_state(sys, state, 0));
    CHECK(print_judgement(*j) == "([u,0 |= a] | [u,0 |= X b])");
}

TEST_CASE("map: resolved left disjunct selects the right child") {
    RuleSystem sys = compile_formula("a | X b");
    Engine engine(sys);
    MonitorState state = engine.initial_state();
    engine.ingest_cell(state, parse_trace("b - b").cells[0], false);
    engine.evaluate_single_pass(state);
    // state now contains [a]F, [X b]? and [(a | X b)]?R
    JudgementPtr j = simplify(*map_state(sys, state, 0));
    CHECK(print_judgement(*j) == "[u,0 |= X b]");
}

TEST_CASE("map: halted state is top") {
    RuleSystem sys = compile_formula("a | X b");
    Engine engine(sys);
    MonitorState state = engine.initial_state();
    Trace t = parse_trace("b - b");
    engine.ingest_cell(state, t.cells[0], false);
    engine.evaluate_single_pass(state);
    engine.react(state);
    engine.ingest_cell(state, t.cells[1], true);
    engine.evaluate_single_pass(state);
    REQUIRE(state.phase() == Phase::Halted);
    CHECK(print_judgement(*simplify(*map_state(sys, state, 1))) == "T");
}

TEST_CASE("map: after reactivation the mirroring next maps to its child") {
    RuleSystem sys = compile_formula("a | X b");
    Engine engine(sys);
    MonitorState state = engine.initial_state();
    engine.ingest_cell(state, parse_trace("b - b").cells[0], false);
    engine.evaluate_single_pass(state);
    engine.react(state);
    // state: R[b], R[X b]M, R[(a | X b)]R  — the table's reactivated row
    JudgementPtr j = simplify(*map_state(sys, state, 1));
    CHECK(print_judgement(*j) == "[u,1 |= b]");
}

TEST_CASE("map: eventually/always are unsupported by design") {
    RuleSystem sys = compile_formula("F a");
    Engine engine(sys);
    MonitorState state = engine.initial_state();
    CHECK_THROWS_AS(map_state(sys, state, 0), MapError);
}

TEST_CASE("map: observations never change the judgement") {
    RuleSystem sys = compile_formula("a | X b");
    Engine engine(sys);
    MonitorState before = engine.initial_state();
    MonitorState after = before;
    Cell cell;
    cell.insert("a");
    cell.insert("b");
    engine.ingest_cell(after, cell, false);
    CHECK(print_judgement(*simplify(*map_state(sys, before, 0))) ==
          print_judgement(*simplify(*map_state(sys, after, 0))));
}

TEST_CASE("simplify: lattice laws") {
    JudgementPtr j = jjoin(jbottom(), jmeet(jtop(), jatom(0, *parse_formula("a"))));
    CHECK(print_judgement(*simplify(*j)) == "[u,0 |= a]");
    JudgementPtr k = jmeet(jbottom(), jatom(0, *parse_formula("a")));
    CHECK(simplify(*k)->kind == Judgement::Kind::Bottom);
}

TEST_CASE("chain: the two-cell strong-next run is fully valid") {
    ChainResult r = check_rewriting_chain(*normalize_nnf(*parse_formula("a | X b")),
                                          parse_trace("b - b"));
    CHECK(r.violations == 0);
    CHECK(r.final_matches_verdict);
    CHECK(r.verdict.outcome == Verdict::Outcome::Success);
    CHECK(r.verdict.at_cell == 2);
    REQUIRE(!r.steps.empty());
    // the run starts at the full disjunction judgement and ends at top
    CHECK(r.steps.front().judgement_text == "([u,0 |= a] | [u,0 |= X b])");
    CHECK(r.steps.back().judgement_text == "T");
}

TEST_CASE("chain: single-cell atom run") {
    ChainResult r =
        check_rewriting_chain(*normalize_nnf(*parse_formula("a")), parse_trace("a,END"));
    CHECK(r.violations == 0);
    CHECK(r.final_matches_verdict);
    CHECK(r.steps.front().judgement_text == "[u,0 |= a]");
    CHECK(r.steps.back().judgement_text == "T");
}

TEST_CASE("chain: until with one index increment") {
    ChainResult r = check_rewriting_chain(*normalize_nnf(*parse_formula("a U b")),
                                          parse_trace("a - b,END"));
    CHECK(r.violations == 0);
    CHECK(r.final_matches_verdict);
    CHECK(r.verdict.outcome == Verdict::Outcome::Success);
    int reacts = 0;
    for (const ChainStep& s : r.steps) reacts += s.reacted ? 1 : 0;
    CHECK(reacts == 1);
}

TEST_CASE("chain: rejects eventually/always") {
    CHECK_THROWS_AS(
        check_rewriting_chain(*normalize_nnf(*parse_formula("F a")), parse_trace("a,END")),
        MapError);
}
