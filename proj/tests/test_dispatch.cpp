#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "lgs/dispatch.hpp"
#include "lgs/oracle.hpp"
#include "lgs/parser.hpp"

using namespace lgs;

namespace {
const std::string corpus = LGS_CORPUS_DIR;

SolveOptions base_opts() {
  SolveOptions o;
  o.base_dir = corpus;
  return o;
}
}  // namespace

TEST_CASE("auto dispatch picks the simple engines") {
  Report r = dispatch(load_game(corpus + "/box.game.json"), base_opts());
  CHECK(r.engine_used == "simple-safety");
  CHECK(r.status == SolveStatus::Converged);
  Report q = dispatch(load_game(corpus + "/sort3.game.json"), base_opts());
  CHECK(q.engine_used == "simple-cobuchi");
  Report p = dispatch(load_game(corpus + "/gf_toggle.game.json"), base_opts());
  CHECK(p.engine_used == "simple-buchi");
}

TEST_CASE("auto dispatch follows the driver order on general objectives") {
  // deterministic objective automaton -> buchi product
  Report r = dispatch(load_game(corpus + "/elevator_bounded.game.json"), base_opts());
  CHECK(r.engine_used == "product-gf");
  CHECK(r.status == SolveStatus::Converged);

  // synthetic check of the order: a general spec whose hand automaton is
  // nondeterministic falls through to the next stage
  Game g = load_game(corpus + "/appendix_c.game.json");
  SolveOptions o = base_opts();
  o.k_max = 4;
  Report rr = dispatch(g, o);
  CHECK(rr.engine_used == "otf");  // neither automaton is deterministic
}

TEST_CASE("forced engines reject unsuitable games") {
  SolveOptions o = base_opts();
  o.engine = EngineChoice::Simple;
  Report r = dispatch(load_game(corpus + "/elevator_bounded.game.json"), o);
  CHECK_FALSE(r.error.empty());
  o.engine = EngineChoice::ProductGF;
  Report p = dispatch(load_game(corpus + "/appendix_c.game.json"), o);
  CHECK_FALSE(p.error.empty());
}

TEST_CASE("realizability verdicts") {
  Vocabulary v;
  v.declare("x", Sort::Int);
  SmtBackend b(v);
  Formula region = parse_constraint("x >= 0", v);
  CHECK(realizability_exact(b, region, parse_constraint("x >= 5", v), Formula::tru()) ==
        Verdict::Realizable);
  CHECK(realizability_exact(b, region, parse_constraint("x <= -1", v), Formula::tru()) ==
        Verdict::Unrealizable);
  CHECK(realizability_exact(b, region, parse_constraint("x >= -2", v), Formula::tru()) ==
        Verdict::Partial);
  CHECK(realizability_exact(b, region, Formula::fals(), Formula::tru()) == Verdict::Realizable);
  CHECK(realizability_bounds(b, parse_constraint("x >= 5", v), region,
                             parse_constraint("x >= 1 && x <= 2", v),
                             Formula::tru()) == Verdict::UnknownUnder);
}

TEST_CASE("report json and emitted artifacts") {
  Game g = load_game(corpus + "/climb.game.json");
  SolveOptions o = base_opts();
  o.emit = {"region_smt2", "strategy_dot", "strategy_json", "report_json"};
  o.out_dir = "/tmp";
  Report r = dispatch(g, o);
  REQUIRE(r.status == SolveStatus::Converged);
  auto paths = emit_report(r, g, o);
  CHECK(paths.size() == 4);
  std::ifstream smt("/tmp/climb.region.smt2");
  std::string line;
  std::getline(smt, line);
  CHECK(line.find("set-logic") != std::string::npos);
  std::string js = report_to_json(r, g);
  CHECK(js.find("\"engine\"") != std::string::npos);
  CHECK(js.find("\"verdict\"") != std::string::npos);
}

TEST_CASE("strategy dot round-trips through the simulator") {
  Game g = load_game(corpus + "/climb.game.json");
  Report r = dispatch(g, base_opts());
  REQUIRE(r.strategy);
  std::string dot = strategy_to_dot(*r.strategy);
  StrategyAutomaton parsed = strategy_from_dot(dot, g.vocab);
  Valuation start{{"x", Rat(19)}};
  PlayResult a = simulate(g, *r.strategy, start, 30, 42, classify(g.objective).predicate);
  PlayResult b = simulate(g, parsed, start, 30, 42, classify(g.objective).predicate);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t i = 0; i < a.states.size(); ++i) CHECK(a.states[i] == b.states[i]);
  CHECK(a.target_hit);
  // json round-trip drives identical plays as well
  StrategyAutomaton parsed2 = strategy_from_json(strategy_to_json(*r.strategy), g.vocab);
  PlayResult c = simulate(g, parsed2, start, 30, 42, classify(g.objective).predicate);
  CHECK(c.states == a.states);
}
