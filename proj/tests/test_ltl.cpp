#include <random>

#include "doctest.h"
#include "lgs/errors.hpp"
#include "lgs/ltl.hpp"

using namespace lgs;

namespace {
Vocabulary vocab_x() {
  Vocabulary v;
  v.declare("x", Sort::Int);
  return v;
}
}  // namespace

TEST_CASE("ltl parsing and binding") {
  Vocabulary v = vocab_x();
  LtlFormula f = parse_ltl("G(F(x==1) && F(x==2) && F(x==3))", v);
  CHECK(f.kind() == LtlFormula::Kind::Globally);
  CHECK(f.children()[0].kind() == LtlFormula::Kind::And);
  // temporal operators bind tighter than boolean connectives
  LtlFormula g = parse_ltl("G x == 1 && x == 2", v);
  CHECK(g.kind() == LtlFormula::Kind::And);
  CHECK(g.children()[0].kind() == LtlFormula::Kind::Globally);
  LtlFormula u = parse_ltl("x < 2 U x > 5", v);
  CHECK(u.kind() == LtlFormula::Kind::Until);
  CHECK_THROWS_AS(parse_ltl("F (x' == 1)", v), ParseError);
}

TEST_CASE("ltl print parse round-trip") {
  Vocabulary v = vocab_x();
  for (const char* text :
       {"G (x >= 1 && x <= 3)", "F (x == 1 && G (!(x == 0)))", "G F (x == 0)",
        "x < 2 U (x > 5 || x == 0)", "X (X (x == 1))", "true"}) {
    LtlFormula f = parse_ltl(text, v);
    LtlFormula g = parse_ltl(f.to_surface(), v);
    CHECK(f.structurally_equal(g));
  }
}

TEST_CASE("negation normal form uses duals") {
  Vocabulary v = vocab_x();
  CHECK(negate_nnf(parse_ltl("G (x <= 3)", v)).structurally_equal(parse_ltl("F (x > 3)", v)));
  CHECK(negate_nnf(parse_ltl("G F (x == 1)", v))
            .structurally_equal(parse_ltl("F G (x != 1)", v)));
  LtlFormula n = negate_nnf(parse_ltl("F (x == 1 && G (!(x == 0)))", v));
  CHECK(n.structurally_equal(parse_ltl("G (x != 1 || F (x == 0))", v)));
}

TEST_CASE("negate_nnf flips lasso satisfaction") {
  Vocabulary v = vocab_x();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> val(0, 3), len(1, 4), plen(0, 3);
  for (const char* text : {"G F (x == 1)", "F (x == 1 && G (!(x == 0)))", "x < 2 U x == 3",
                           "G (x >= 1 && x <= 3)"}) {
    LtlFormula f = parse_ltl(text, v);
    LtlFormula nf = negate_nnf(f);
    LtlFormula back = negate_nnf(nf);
    for (int t = 0; t < 200; ++t) {
      std::vector<std::map<std::string, Rat>> pre, cyc;
      for (int i = plen(rng); i > 0; --i) pre.push_back({{"x", Rat(val(rng))}});
      for (int i = len(rng); i > 0; --i) cyc.push_back({{"x", Rat(val(rng))}});
      bool a = eval_ltl_lasso(f, pre, cyc);
      CHECK(a != eval_ltl_lasso(nf, pre, cyc));
      CHECK(a == eval_ltl_lasso(back, pre, cyc));
    }
  }
}

TEST_CASE("classification is purely syntactic") {
  Vocabulary v = vocab_x();
  CHECK(classify(parse_ltl("G (x >= 0 && x <= 2)", v)).kind == SpecClass::Kind::Safety);
  CHECK(classify(parse_ltl("F (x < 0)", v)).kind == SpecClass::Kind::Reachability);
  CHECK(classify(parse_ltl("G F (x == 1)", v)).kind == SpecClass::Kind::Buchi);
  CHECK(classify(parse_ltl("F G (x == 1)", v)).kind == SpecClass::Kind::CoBuchi);
  CHECK(classify(parse_ltl("G (F (x == 1) && F (x == 2))", v)).kind == SpecClass::Kind::General);
  CHECK(classify(parse_ltl("G F true", v)).kind == SpecClass::Kind::Buchi);  // no semantic peeking
  SpecClass cls = classify(parse_ltl("G (x >= 1 && (x <= 3 && x != 2))", v));
  CHECK(cls.kind == SpecClass::Kind::Safety);
  CHECK(cls.predicate.free_vars() == std::set<std::string>{"x"});
}
