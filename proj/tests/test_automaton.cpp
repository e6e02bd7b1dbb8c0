#include "doctest.h"
#include "lgs/automaton.hpp"
#include "lgs/errors.hpp"
#include "lgs/parser.hpp"

using namespace lgs;

namespace {
Vocabulary vocab_x() {
  Vocabulary v;
  v.declare("x", Sort::Int);
  return v;
}
const std::string corpus = LGS_CORPUS_DIR;
}  // namespace

TEST_CASE("hand-encoded corpus automata load and classify") {
  Vocabulary v = vocab_x();
  SmtBackend b(v);
  SymbolicBuchiAutomaton rr = load_automaton(corpus + "/elevator_gf123.aut.json", v);
  CHECK(rr.num_states == 4);
  CHECK(is_deterministic(rr, b));
  SymbolicBuchiAutomaton ucw = load_automaton(corpus + "/gf_toggle_neg.aut.json", v);
  CHECK(ucw.view == AcceptanceView::UniversalCoBuchi);
  CHECK_FALSE(is_deterministic(ucw, b));
  SymbolicBuchiAutomaton nba = load_automaton(corpus + "/appendix_c_psi.aut.json", v);
  CHECK_FALSE(is_deterministic(nba, b));
}

TEST_CASE("invalid automaton files are rejected") {
  Vocabulary v = vocab_x();
  CHECK_THROWS_AS(parse_automaton_json(R"json({"states":2,"initial":[],"final":[0],
    "transitions":[]})json", v), SchemaError);
  CHECK_THROWS_AS(parse_automaton_json(R"json({"states":2,"initial":[0],"final":[7],
    "transitions":[]})json", v), SchemaError);
  CHECK_THROWS_AS(parse_automaton_json(R"json({"states":1,"initial":[0],"final":[0],
    "transitions":[{"src":0,"guard":"x' == 1","dst":0}]})json", v), SchemaError);
}

TEST_CASE("save load round-trip") {
  Vocabulary v = vocab_x();
  SymbolicBuchiAutomaton a = load_automaton(corpus + "/gf_toggle_neg.aut.json", v);
  SymbolicBuchiAutomaton b2 = parse_automaton_json(automaton_to_json(a), v);
  CHECK(b2.num_states == a.num_states);
  CHECK(b2.initial == a.initial);
  CHECK(b2.final_states == a.final_states);
  CHECK(b2.view == a.view);
  REQUIRE(b2.transitions.size() == a.transitions.size());
  for (std::size_t i = 0; i < a.transitions.size(); ++i) {
    CHECK(b2.transitions[i].src == a.transitions[i].src);
    CHECK(b2.transitions[i].dst == a.transitions[i].dst);
  }
}

TEST_CASE("completion adds a residual-guarded sink only where needed") {
  Vocabulary v = vocab_x();
  SmtBackend b(v);
  // the corpus universal co-Buchi automaton is complete as given
  SymbolicBuchiAutomaton ucw = load_automaton(corpus + "/gf_toggle_neg.aut.json", v);
  SymbolicBuchiAutomaton done = complete(ucw, b);
  CHECK(done.num_states == ucw.num_states);
  // a lone x==1 edge needs the x!=1 residual
  SymbolicBuchiAutomaton partial;
  partial.num_states = 1;
  partial.initial = {0};
  partial.final_states = {0};
  partial.transitions = {{0, parse_constraint("x == 1", v), 0}};
  SymbolicBuchiAutomaton full = complete(partial, b);
  CHECK(full.num_states == 2);
  bool found = false;
  for (const auto& t : full.transitions)
    if (t.src == 0 && t.dst == 1) {
      found = true;
      CHECK(b.equivalent(t.guard, parse_constraint("x != 1", v)));
    }
  CHECK(found);
  // completeness: guards out of every state now cover everything
  for (int q = 0; q < full.num_states; ++q) {
    std::vector<Formula> guards;
    for (const auto& t : full.transitions)
      if (t.src == q) guards.push_back(t.guard);
    CHECK(b.is_valid(Formula::disj(guards)));
  }
}

TEST_CASE("determinism needs disjoint guards toward distinct targets") {
  Vocabulary v = vocab_x();
  SmtBackend b(v);
  SymbolicBuchiAutomaton a;
  a.num_states = 2;
  a.initial = {0};
  a.final_states = {1};
  a.transitions = {{0, parse_constraint("x <= 1", v), 0}, {0, parse_constraint("x >= 2", v), 1},
                   {1, parse_constraint("true", v), 1}};
  CHECK(is_deterministic(a, b));
  a.transitions[1].guard = parse_constraint("x >= 1", v);  // overlap at x == 1
  CHECK_FALSE(is_deterministic(a, b));
  // parallel edges to one target do not break determinism
  SymbolicBuchiAutomaton p;
  p.num_states = 1;
  p.initial = {0};
  p.final_states = {0};
  p.transitions = {{0, parse_constraint("x <= 5", v), 0}, {0, parse_constraint("x >= 0", v), 0}};
  CHECK(is_deterministic(p, b));
}

TEST_CASE("transition formula agrees with the explicit relation") {
  Vocabulary v;
  v.declare("x", Sort::Int);
  v.declare("q", Sort::Int, VarRole::Automaton);
  SmtBackend b(v);
  SymbolicBuchiAutomaton a = load_automaton(corpus + "/gf_toggle_neg.aut.json", v);
  Formula tf = transition_formula(a, "q");
  for (long q = 0; q < a.num_states; ++q)
    for (long x = 0; x <= 3; ++x)
      for (long qn = 0; qn < a.num_states; ++qn) {
        bool explicit_edge = false;
        for (const auto& t : a.transitions)
          if (t.src == q && t.dst == qn && eval_formula(t.guard, {{"x", Rat(x)}}))
            explicit_edge = true;
        Valuation val{{"q", Rat(q)}, {"x", Rat(x)}, {"q'", Rat(qn)}};
        CHECK(eval_formula(tf, val) == explicit_edge);
      }
}

TEST_CASE("canonicalization keeps reachable states in bfs order") {
  Vocabulary v = vocab_x();
  SymbolicBuchiAutomaton a;
  a.num_states = 4;
  a.initial = {2};
  a.final_states = {0};
  a.transitions = {{2, parse_constraint("true", v), 0},
                   {0, parse_constraint("true", v), 2},
                   {3, parse_constraint("true", v), 3}};  // unreachable
  SymbolicBuchiAutomaton c = canonicalize(a);
  CHECK(c.num_states == 2);
  CHECK(c.initial == std::vector<int>{0});
  CHECK(c.final_states == std::vector<int>{1});
}
