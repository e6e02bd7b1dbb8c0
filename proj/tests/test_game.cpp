#include "doctest.h"
#include "lgs/errors.hpp"
#include "lgs/game.hpp"
#include "lgs/parser.hpp"

using namespace lgs;

namespace {
const std::string corpus = LGS_CORPUS_DIR;
}

TEST_CASE("game files load with validation") {
  Game g = load_game(corpus + "/elevator.game.json");
  CHECK(g.name == "elevator");
  CHECK(g.player == Player::Controller);
  CHECK(g.state_vars() == std::vector<std::string>{"x"});
  Game c = load_game(corpus + "/cinderella_c3.game.json");
  CHECK(c.variables.size() == 5);
  CHECK(c.variables[0].sort == Sort::Real);
  CHECK(c.init.has_value());
}

TEST_CASE("incomplete moves are rejected with a witness state") {
  const char* text = R"json({
    "variables": [{"name": "x", "sort": "int"}],
    "controller": "x' == x",
    "environment": "false",
    "spec": "G (x >= 0)"
  })json";
  try {
    parse_game_json(text, "bad");
    CHECK(false);
  } catch (const SchemaError& e) {
    std::string msg = e.what();
    CHECK(msg.find("environment") != std::string::npos);
    CHECK(msg.find("x=") != std::string::npos);
  }
}

TEST_CASE("fnd splitting certifies functional moves") {
  Game g = load_game(corpus + "/elevator.game.json");
  SmtBackend b(g.vocab);
  auto moves = fnd_moves(g.con, g, b);
  REQUIRE(moves.has_value());
  CHECK(moves->size() == 3);
  CHECK_FALSE(fnd_moves(parse_constraint("x' >= x", g.vocab), g, b).has_value());
  auto single = fnd_moves(parse_constraint("x' == x", g.vocab), g, b);
  REQUIRE(single.has_value());
  CHECK(single->size() == 1);
}

TEST_CASE("product construction and projection") {
  Game g = load_game(corpus + "/elevator_bounded.game.json");
  SmtBackend b(g.vocab);
  SymbolicBuchiAutomaton a = load_automaton(corpus + "/elevator_gf123.aut.json", g.vocab);
  Game p = product(g, a, ProductPolarity::Accepting, b);
  CHECK(p.vocab.contains("q"));
  CHECK(classify(p.objective).kind == SpecClass::Kind::Buchi);
  // the product stays finitely nondeterministic
  SmtBackend pb(p.vocab);
  auto moves = fnd_moves(p.con, p, pb);
  CHECK(moves.has_value());
  // rejecting polarity flips the acceptance shape
  Game pr = product_unchecked(g, a, ProductPolarity::Rejecting, b);
  CHECK(classify(pr.objective).kind == SpecClass::Kind::CoBuchi);
  // projection substitutes the automaton state
  Formula wp = parse_constraint("(q == 0 && x >= 1) || (q == 1 && x >= 5)", p.vocab);
  CHECK(pb.equivalent(project_initial_q(wp, "q", 0, p.vocab),
                      parse_constraint("x >= 1", p.vocab)));
  CHECK(project_initial_q(Formula::fals(), "q", 0, p.vocab).is_false());
}

TEST_CASE("product refuses bad automata") {
  Game g = load_game(corpus + "/appendix_c.game.json");
  SmtBackend b(g.vocab);
  SymbolicBuchiAutomaton nba = load_automaton(corpus + "/appendix_c_psi.aut.json", g.vocab);
  SymbolicBuchiAutomaton completed = complete(nba, b);
  CHECK_THROWS_AS(product(g, completed, ProductPolarity::Accepting, b), SchemaError);
  CHECK_THROWS_AS(product(g, nba, ProductPolarity::Accepting, b), SchemaError);  // incomplete too
}
