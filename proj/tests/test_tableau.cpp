#include <random>

#include "doctest.h"
#include "lgs/parser.hpp"
#include "lgs/tableau.hpp"

using namespace lgs;

namespace {

void lasso_suite(const std::string& text, int lo, int hi, int trials, std::uint64_t seed) {
  Vocabulary v;
  v.declare("x", Sort::Int);
  SmtBackend b(v);
  LtlFormula phi = parse_ltl(text, v);
  SymbolicBuchiAutomaton a = ltl_to_ba(phi, b);
  REQUIRE(a.initial.size() == 1);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> val(lo, hi), len(1, 4), plen(0, 4);
  for (int t = 0; t < trials; ++t) {
    std::vector<std::map<std::string, Rat>> pre, cyc;
    for (int i = plen(rng); i > 0; --i) pre.push_back({{"x", Rat(val(rng))}});
    for (int i = len(rng); i > 0; --i) cyc.push_back({{"x", Rat(val(rng))}});
    bool direct = eval_ltl_lasso(phi, pre, cyc);
    bool accepted = lasso_accepted(a, pre, cyc);
    REQUIRE_MESSAGE(direct == accepted, text, " direct=", direct, " automaton=", accepted);
  }
}

}  // namespace

TEST_CASE("translation matches lasso semantics across shapes") {
  lasso_suite("true", 0, 1, 50, 1);
  lasso_suite("F (x < 0)", -2, 3, 300, 2);
  lasso_suite("G (x >= 0)", -2, 3, 300, 3);
  lasso_suite("G F (x == 1)", 0, 3, 300, 4);
  lasso_suite("F G (x == 2)", 0, 3, 300, 5);
  lasso_suite("G (F (x == 1) && F (x == 2) && F (x == 3))", 0, 4, 400, 6);
  lasso_suite("F (x == 1 && G (!(x == 0)))", 0, 2, 400, 7);
  lasso_suite("x < 2 U x > 5", 0, 8, 300, 8);
  lasso_suite("X (X (x == 0))", 0, 2, 300, 9);
  lasso_suite("G (x == 1 || F (x == 3))", 0, 4, 400, 10);
  lasso_suite("G (x >= 1 || F (x == 0))", -1, 2, 300, 11);
}

TEST_CASE("degenerate translations") {
  Vocabulary v;
  v.declare("x", Sort::Int);
  SmtBackend b(v);
  SymbolicBuchiAutomaton t = ltl_to_ba(parse_ltl("true", v), b);
  CHECK(lasso_accepted(t, {}, {{{"x", Rat(0)}}}));
  SymbolicBuchiAutomaton f = ltl_to_ba(parse_ltl("false", v), b);
  CHECK_FALSE(lasso_accepted(f, {}, {{{"x", Rat(0)}}}));
}
