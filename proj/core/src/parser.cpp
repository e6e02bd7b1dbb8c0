#include "lgs/parser.hpp"

#include "lexer.hpp"
#include "lgs/errors.hpp"

namespace lgs {

using detail::Tok;
using detail::Token;

namespace {

class ConstraintParser {
 public:
  ConstraintParser(std::vector<Token> toks, const Vocabulary& vocab)
      : toks_(std::move(toks)), vocab_(vocab) {}

  Formula parse() {
    Formula f = parse_or();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  void advance() { ++i_; }
  bool accept(Tok k) {
    if (cur().kind == k) {
      advance();
      return true;
    }
    return false;
  }
  void expect(Tok k, const std::string& what) {
    if (!accept(k)) throw ParseError("expected " + what, cur().pos);
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (accept(Tok::OrOr)) parts.push_back(parse_and());
    return Formula::disj(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_un()};
    while (accept(Tok::AndAnd)) parts.push_back(parse_un());
    return Formula::conj(std::move(parts));
  }

  Formula parse_un() {
    if (accept(Tok::Not)) return Formula::neg(parse_un());
    if (cur().kind == Tok::LParen) {
      advance();
      Formula f = parse_or();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (cur().kind == Tok::Ident && cur().text == "true") {
      advance();
      return Formula::tru();
    }
    if (cur().kind == Tok::Ident && cur().text == "false") {
      advance();
      return Formula::fals();
    }
    return parse_atom();
  }

  Formula parse_atom() {
    LinExpr lhs = parse_lin();
    Cmp cmp;
    switch (cur().kind) {
      case Tok::Lt: cmp = Cmp::Lt; break;
      case Tok::Le: cmp = Cmp::Le; break;
      case Tok::EqEq: cmp = Cmp::Eq; break;
      case Tok::Ge: cmp = Cmp::Ge; break;
      case Tok::Gt: cmp = Cmp::Gt; break;
      case Tok::Ne: cmp = Cmp::Ne; break;
      default: throw ParseError("expected comparison operator", cur().pos);
    }
    advance();
    LinExpr rhs = parse_lin();
    return Formula::cmp_expr(lhs, cmp, rhs);
  }

  LinExpr parse_lin() {
    LinExpr e = parse_term(false);
    for (;;) {
      if (accept(Tok::Plus)) {
        e.add(parse_term(false));
      } else if (cur().kind == Tok::Minus) {
        advance();
        e.add(parse_term(false), Rat(-1));
      } else {
        return e;
      }
    }
  }

  // term := rat | rat "*" var | var, with optional leading '-'.
  LinExpr parse_term(bool negated) {
    if (accept(Tok::Minus)) return parse_term(!negated);
    Rat sign = negated ? Rat(-1) : Rat(1);
    if (cur().kind == Tok::Number) {
      Rat r = parse_number();
      if (accept(Tok::Star)) {
        std::string v = parse_var();
        return LinExpr::var(v, r * sign);
      }
      return LinExpr::cons(r * sign);
    }
    if (cur().kind == Tok::Ident) {
      std::string v = parse_var();
      if (cur().kind == Tok::Star)
        throw ParseError("nonlinear term: variable product is not allowed", cur().pos);
      return LinExpr::var(v, sign);
    }
    throw ParseError("expected term", cur().pos);
  }

  Rat parse_number() {
    std::size_t pos = cur().pos;
    std::string text = cur().text;
    advance();
    if (cur().kind == Tok::Slash) {
      advance();
      if (cur().kind != Tok::Number) throw ParseError("expected denominator", cur().pos);
      text += "/" + cur().text;
      advance();
    }
    auto r = parse_rational(text);
    if (!r) throw ParseError("malformed rational '" + text + "'", pos);
    return *r;
  }

  std::string parse_var() {
    if (cur().kind != Tok::Ident) throw ParseError("expected variable", cur().pos);
    std::string name = cur().text;
    std::size_t pos = cur().pos;
    advance();
    if (!vocab_.contains(name)) throw ParseError("undeclared variable '" + name + "'", pos);
    if (cur().kind == Tok::Star || cur().kind == Tok::Ident)
      throw ParseError("nonlinear term: variable product is not allowed", cur().pos);
    return name;
  }

  std::vector<Token> toks_;
  const Vocabulary& vocab_;
  std::size_t i_ = 0;
};

}  // namespace

Formula parse_constraint(const std::string& text, const Vocabulary& vocab) {
  return ConstraintParser(detail::lex(text), vocab).parse();
}

}  // namespace lgs
