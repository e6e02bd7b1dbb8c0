#include "doctest.h"
#include "lgs/errors.hpp"
#include "lgs/parser.hpp"
#include "lgs/smtlib.hpp"

using namespace lgs;

namespace {
Vocabulary vocab_xy() {
  Vocabulary v;
  v.declare("x", Sort::Int);
  v.declare("y", Sort::Real);
  return v;
}
}  // namespace

TEST_CASE("parser handles the expression grammar") {
  Vocabulary v = vocab_xy();
  Formula f = parse_constraint("x' == x + 1 || x' == x - 1 || x' == x", v);
  CHECK(f.kind() == Formula::Kind::Or);
  CHECK(f.children().size() == 3);
  CHECK(parse_constraint("true", v).is_true());
  Formula a = parse_constraint("2*x + y <= 3", v);
  CHECK(a.kind() == Formula::Kind::Atom);
  CHECK(a.atom_ref().coeffs.at("x") == Rat(2));
  Formula frac = parse_constraint("1/2*y >= 1.5", v);
  CHECK(frac.atom_ref().coeffs.at("y") == rat(1, 2));
}

TEST_CASE("parse errors carry positions and reasons") {
  Vocabulary v = vocab_xy();
  CHECK_THROWS_AS(parse_constraint("x ==", v), ParseError);
  CHECK_THROWS_AS(parse_constraint("z == 1", v), ParseError);
  CHECK_THROWS_AS(parse_constraint("x * y == 1", v), ParseError);
  try {
    parse_constraint("x == #", v);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.pos == 5);
  }
}

TEST_CASE("surface printing round-trips") {
  Vocabulary v = vocab_xy();
  for (const char* text : {"x <= 3", "x == 1 || x == 2", "x >= 0 && (y <= 1 || x != 2)",
                           "0 - x + 2*y >= 1/3"}) {
    Formula f = parse_constraint(text, v);
    Formula g = parse_constraint(f.to_surface(), v);
    CHECK(f.structurally_equal(g));
  }
}

TEST_CASE("rename shifts tiers both ways") {
  Vocabulary v = vocab_xy();
  Formula f = parse_constraint("x >= 0", v);
  CHECK(rename(f, RenameShift::Prime).to_surface() == "x' >= 0");
  Formula g = parse_constraint("x' == x", v);
  Formula gpp = rename(g, RenameShift::ToDoublePrime);
  CHECK(gpp.free_vars() == std::set<std::string>{"x'", "x''"});
  CHECK(rename(rename(f, RenameShift::Prime), RenameShift::Unprime).structurally_equal(f));
  Formula dd = rename(g, RenameShift::Prime);
  CHECK_THROWS_AS(rename(dd, RenameShift::Prime), LgsError);  // x'' cannot shift further
}

TEST_CASE("eval uses exact arithmetic") {
  Vocabulary v = vocab_xy();
  Formula f = parse_constraint("x <= 3", v);
  CHECK(eval_formula(f, {{"x", Rat(3)}}));
  CHECK_FALSE(eval_formula(parse_constraint("x <= 3 && x >= 0", v), {{"x", Rat(-1)}}));
  CHECK(eval_formula(parse_constraint("y < 0.5", v), {{"y", rat(49, 100)}}));
  CHECK_THROWS_AS(eval_formula(f, {{"y", Rat(0)}}), LgsError);
}

TEST_CASE("negation is an involution on formulas") {
  Vocabulary v = vocab_xy();
  for (const char* text : {"x <= 3", "x == 1 || (y >= 2 && x != 0)", "x < 1 && y > 0"}) {
    Formula f = parse_constraint(text, v);
    CHECK(Formula::neg(Formula::neg(f)).structurally_equal(f));
  }
}

TEST_CASE("smtlib script emission") {
  Vocabulary v = vocab_xy();
  Formula f = parse_constraint("2*x + y <= 3 && x != 0", v);
  std::string s = to_smt2_script(f, v);
  CHECK(s.find("(declare-fun x () Int)") != std::string::npos);
  CHECK(s.find("(declare-fun y () Real)") != std::string::npos);
  CHECK(s.find("(assert") != std::string::npos);
  CHECK(to_smt2_script(Formula::fals(), v).find("(assert false)") != std::string::npos);
}
