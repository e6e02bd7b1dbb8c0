#include "lgs/ltl.hpp"

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "lgs/errors.hpp"
#include "lgs/parser.hpp"

namespace lgs {

struct LtlFormula::Node {
  Kind kind;
  Formula constraint;
  std::vector<LtlFormula> children;
};

LtlFormula LtlFormula::atom(Formula constraint) {
  if (!constraint.is_quantifier_free()) throw LgsError("LTL atom must be quantifier-free");
  for (const auto& v : constraint.free_vars())
    if (Vocabulary::tier(v) != 0) throw LgsError("primed variable '" + v + "' in LTL atom");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->constraint = std::move(constraint);
  return LtlFormula(n);
}

LtlFormula LtlFormula::lnot(const LtlFormula& f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children = {f};
  return LtlFormula(n);
}

LtlFormula LtlFormula::land(std::vector<LtlFormula> fs) {
  if (fs.size() == 1) return fs[0];
  std::vector<LtlFormula> kids;
  for (auto& f : fs) {
    if (f.kind() == Kind::And)
      for (const auto& k : f.children()) kids.push_back(k);
    else
      kids.push_back(f);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(kids);
  return LtlFormula(n);
}

LtlFormula LtlFormula::lor(std::vector<LtlFormula> fs) {
  if (fs.size() == 1) return fs[0];
  std::vector<LtlFormula> kids;
  for (auto& f : fs) {
    if (f.kind() == Kind::Or)
      for (const auto& k : f.children()) kids.push_back(k);
    else
      kids.push_back(f);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(kids);
  return LtlFormula(n);
}

LtlFormula LtlFormula::next(const LtlFormula& f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Next;
  n->children = {f};
  return LtlFormula(n);
}

LtlFormula LtlFormula::until(const LtlFormula& a, const LtlFormula& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Until;
  n->children = {a, b};
  return LtlFormula(n);
}

LtlFormula LtlFormula::release(const LtlFormula& a, const LtlFormula& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Release;
  n->children = {a, b};
  return LtlFormula(n);
}

LtlFormula LtlFormula::finally(const LtlFormula& f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Finally;
  n->children = {f};
  return LtlFormula(n);
}

LtlFormula LtlFormula::globally(const LtlFormula& f) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Globally;
  n->children = {f};
  return LtlFormula(n);
}

LtlFormula::Kind LtlFormula::kind() const { return node_->kind; }

const Formula& LtlFormula::constraint() const {
  if (kind() != Kind::Atom) throw LgsError("not an LTL atom");
  return node_->constraint;
}

const std::vector<LtlFormula>& LtlFormula::children() const { return node_->children; }

bool LtlFormula::is_temporal_free() const {
  switch (kind()) {
    case Kind::Atom: return true;
    case Kind::Not:
    case Kind::And:
    case Kind::Or: {
      for (const auto& k : children())
        if (!k.is_temporal_free()) return false;
      return true;
    }
    default: return false;
  }
}

Formula LtlFormula::flatten_boolean() const {
  switch (kind()) {
    case Kind::Atom: return constraint();
    case Kind::Not: return Formula::neg(children()[0].flatten_boolean());
    case Kind::And: {
      std::vector<Formula> fs;
      for (const auto& k : children()) fs.push_back(k.flatten_boolean());
      return Formula::conj(std::move(fs));
    }
    case Kind::Or: {
      std::vector<Formula> fs;
      for (const auto& k : children()) fs.push_back(k.flatten_boolean());
      return Formula::disj(std::move(fs));
    }
    default: throw LgsError("formula has temporal operators");
  }
}

std::string LtlFormula::to_surface() const {
  switch (kind()) {
    case Kind::Atom: {
      const Formula& c = constraint();
      if (c.kind() == Formula::Kind::Atom || c.is_true() || c.is_false()) return c.to_surface();
      return "(" + c.to_surface() + ")";
    }
    case Kind::Not: return "!(" + children()[0].to_surface() + ")";
    case Kind::And: {
      std::string s;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) s += " && ";
        s += "(" + children()[i].to_surface() + ")";
      }
      return s;
    }
    case Kind::Or: {
      std::string s;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) s += " || ";
        s += "(" + children()[i].to_surface() + ")";
      }
      return s;
    }
    case Kind::Next: return "X (" + children()[0].to_surface() + ")";
    case Kind::Finally: return "F (" + children()[0].to_surface() + ")";
    case Kind::Globally: return "G (" + children()[0].to_surface() + ")";
    case Kind::Until:
      return "(" + children()[0].to_surface() + ") U (" + children()[1].to_surface() + ")";
    case Kind::Release:
      // internal only; printed for diagnostics
      return "(" + children()[0].to_surface() + ") R (" + children()[1].to_surface() + ")";
  }
  throw LgsError("bad kind");
}

std::string LtlFormula::repr() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::Atom: return "a" + constraint().repr();
    case Kind::Not: return "(! " + children()[0].repr() + ")";
    case Kind::And:
    case Kind::Or: {
      os << (kind() == Kind::And ? "(& " : "(| ");
      for (const auto& k : children()) os << k.repr();
      os << ")";
      return os.str();
    }
    case Kind::Next: return "(X " + children()[0].repr() + ")";
    case Kind::Finally: return "(F " + children()[0].repr() + ")";
    case Kind::Globally: return "(G " + children()[0].repr() + ")";
    case Kind::Until: return "(U " + children()[0].repr() + " " + children()[1].repr() + ")";
    case Kind::Release: return "(R " + children()[0].repr() + " " + children()[1].repr() + ")";
  }
  throw LgsError("bad kind");
}

std::vector<Formula> LtlFormula::atoms() const {
  std::vector<Formula> out;
  std::set<std::string> seen;
  std::function<void(const LtlFormula&)> walk = [&](const LtlFormula& f) {
    if (f.kind() == Kind::Atom) {
      if (seen.insert(f.constraint().repr()).second) out.push_back(f.constraint());
      return;
    }
    for (const auto& k : f.children()) walk(k);
  };
  walk(*this);
  return out;
}

// ---- parser ----------------------------------------------------------------

namespace {

using detail::Tok;
using detail::Token;

class LtlParser {
 public:
  LtlParser(const std::string& text, const Vocabulary& vocab)
      : text_(text), toks_(detail::lex(text)), vocab_(vocab) {}

  LtlFormula parse() {
    LtlFormula f = parse_or();
    if (cur().kind != Tok::End) throw ParseError("unexpected trailing input", cur().pos);
    return f;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& peek(std::size_t n = 1) const {
    return toks_[std::min(i_ + n, toks_.size() - 1)];
  }
  void advance() { ++i_; }
  bool accept(Tok k) {
    if (cur().kind == k) {
      advance();
      return true;
    }
    return false;
  }

  LtlFormula parse_or() {
    std::vector<LtlFormula> parts{parse_and()};
    while (accept(Tok::OrOr)) parts.push_back(parse_and());
    return LtlFormula::lor(std::move(parts));
  }

  LtlFormula parse_and() {
    std::vector<LtlFormula> parts{parse_until()};
    while (accept(Tok::AndAnd)) parts.push_back(parse_until());
    return LtlFormula::land(std::move(parts));
  }

  // U is right-associative and binds tighter than && / ||.
  LtlFormula parse_until() {
    LtlFormula lhs = parse_un();
    if (cur().kind == Tok::Ident && cur().text == "U") {
      advance();
      return LtlFormula::until(lhs, parse_until());
    }
    return lhs;
  }

  LtlFormula parse_un() {
    if (accept(Tok::Not)) return LtlFormula::lnot(parse_un());
    if (cur().kind == Tok::Ident && cur().text.size() == 1 && !vocab_.contains(cur().text)) {
      char c = cur().text[0];
      if (c == 'G') {
        advance();
        return LtlFormula::globally(parse_un());
      }
      if (c == 'F') {
        advance();
        return LtlFormula::finally(parse_un());
      }
      if (c == 'X') {
        advance();
        return LtlFormula::next(parse_un());
      }
    }
    if (cur().kind == Tok::LParen) {
      advance();
      LtlFormula f = parse_or();
      if (!accept(Tok::RParen)) throw ParseError("expected ')'", cur().pos);
      return f;
    }
    if (cur().kind == Tok::Ident && cur().text == "true" && !is_atom_start()) {
      advance();
      return LtlFormula::atom(Formula::tru());
    }
    if (cur().kind == Tok::Ident && cur().text == "false" && !is_atom_start()) {
      advance();
      return LtlFormula::atom(Formula::fals());
    }
    return parse_constraint_atom();
  }

  bool is_atom_start() const {
    // after "true"/"false" an operator/paren/end follows unless it is a
    // variable used in a comparison
    Tok k = peek().kind;
    return k == Tok::Lt || k == Tok::Le || k == Tok::EqEq || k == Tok::Ge || k == Tok::Gt ||
           k == Tok::Ne || k == Tok::Plus || k == Tok::Minus || k == Tok::Star;
  }

  // An atomic comparison: delegate to the constraint parser over the token
  // span of one atom.
  LtlFormula parse_constraint_atom() {
    std::size_t start_tok = i_;
    int depth = 0;
    // find the end of the atom: tokens up to &&, ||, U, ')' at depth 0
    while (true) {
      const Token& t = toks_[i_];
      if (t.kind == Tok::End) break;
      if (t.kind == Tok::LParen) ++depth;
      if (t.kind == Tok::RParen) {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0 &&
          (t.kind == Tok::AndAnd || t.kind == Tok::OrOr ||
           (t.kind == Tok::Ident && t.text == "U")))
        break;
      advance();
    }
    if (i_ == start_tok) throw ParseError("expected atomic constraint", cur().pos);
    std::size_t from = toks_[start_tok].pos;
    std::size_t to = toks_[i_].kind == Tok::End ? text_.size() : toks_[i_].pos;
    std::string slice = text_.substr(from, to - from);
    Formula c = parse_constraint(slice, vocab_);
    for (const auto& v : c.free_vars())
      if (Vocabulary::tier(v) != 0)
        throw ParseError("primed variable '" + v + "' not allowed in LTL atom", from);
    return LtlFormula::atom(c);
  }

  const std::string& text_;
  std::vector<Token> toks_;
  const Vocabulary& vocab_;
  std::size_t i_ = 0;
};

}  // namespace

LtlFormula parse_ltl(const std::string& text, const Vocabulary& vocab) {
  return LtlParser(text, vocab).parse();
}

// ---- NNF and classification -------------------------------------------------

LtlFormula to_nnf(const LtlFormula& f) {
  switch (f.kind()) {
    case LtlFormula::Kind::Atom: return f;
    case LtlFormula::Kind::Not: return negate_nnf(f.children()[0]);
    case LtlFormula::Kind::And: {
      std::vector<LtlFormula> kids;
      for (const auto& k : f.children()) kids.push_back(to_nnf(k));
      return LtlFormula::land(std::move(kids));
    }
    case LtlFormula::Kind::Or: {
      std::vector<LtlFormula> kids;
      for (const auto& k : f.children()) kids.push_back(to_nnf(k));
      return LtlFormula::lor(std::move(kids));
    }
    case LtlFormula::Kind::Next: return LtlFormula::next(to_nnf(f.children()[0]));
    case LtlFormula::Kind::Until:
      return LtlFormula::until(to_nnf(f.children()[0]), to_nnf(f.children()[1]));
    case LtlFormula::Kind::Release:
      return LtlFormula::release(to_nnf(f.children()[0]), to_nnf(f.children()[1]));
    case LtlFormula::Kind::Finally: return LtlFormula::finally(to_nnf(f.children()[0]));
    case LtlFormula::Kind::Globally: return LtlFormula::globally(to_nnf(f.children()[0]));
  }
  throw LgsError("bad kind");
}

LtlFormula negate_nnf(const LtlFormula& f) {
  switch (f.kind()) {
    case LtlFormula::Kind::Atom:
      // boolean structure inside the atom is negated structurally
      return LtlFormula::atom(Formula::neg(f.constraint()));
    case LtlFormula::Kind::Not: return to_nnf(f.children()[0]);
    case LtlFormula::Kind::And: {
      std::vector<LtlFormula> kids;
      for (const auto& k : f.children()) kids.push_back(negate_nnf(k));
      return LtlFormula::lor(std::move(kids));
    }
    case LtlFormula::Kind::Or: {
      std::vector<LtlFormula> kids;
      for (const auto& k : f.children()) kids.push_back(negate_nnf(k));
      return LtlFormula::land(std::move(kids));
    }
    case LtlFormula::Kind::Next: return LtlFormula::next(negate_nnf(f.children()[0]));
    case LtlFormula::Kind::Until:
      return LtlFormula::release(negate_nnf(f.children()[0]), negate_nnf(f.children()[1]));
    case LtlFormula::Kind::Release:
      return LtlFormula::until(negate_nnf(f.children()[0]), negate_nnf(f.children()[1]));
    case LtlFormula::Kind::Finally: return LtlFormula::globally(negate_nnf(f.children()[0]));
    case LtlFormula::Kind::Globally: return LtlFormula::finally(negate_nnf(f.children()[0]));
  }
  throw LgsError("bad kind");
}

SpecClass classify(const LtlFormula& raw) {
  LtlFormula f = to_nnf(raw);
  auto pure = [](const LtlFormula& g) { return g.is_temporal_free(); };
  if (f.kind() == LtlFormula::Kind::Globally) {
    const LtlFormula& inner = f.children()[0];
    if (pure(inner)) return {SpecClass::Kind::Safety, inner.flatten_boolean()};
    if (inner.kind() == LtlFormula::Kind::Finally && pure(inner.children()[0]))
      return {SpecClass::Kind::Buchi, inner.children()[0].flatten_boolean()};
  }
  if (f.kind() == LtlFormula::Kind::Finally) {
    const LtlFormula& inner = f.children()[0];
    if (pure(inner)) return {SpecClass::Kind::Reachability, inner.flatten_boolean()};
    if (inner.kind() == LtlFormula::Kind::Globally && pure(inner.children()[0]))
      return {SpecClass::Kind::CoBuchi, inner.children()[0].flatten_boolean()};
  }
  return {SpecClass::Kind::General, Formula::tru()};
}

// ---- lasso semantics ---------------------------------------------------------

bool eval_ltl_lasso(const LtlFormula& f, const std::vector<std::map<std::string, Rat>>& prefix,
                    const std::vector<std::map<std::string, Rat>>& cycle) {
  if (cycle.empty()) throw LgsError("lasso cycle must be nonempty");
  const std::size_t n = prefix.size() + cycle.size();
  auto state_at = [&](std::size_t i) -> const std::map<std::string, Rat>& {
    return i < prefix.size() ? prefix[i] : cycle[i - prefix.size()];
  };
  auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : prefix.size(); };

  // truth per position, computed bottom-up; fixpoint iteration resolves the
  // cyclic dependencies of U / R on the loop
  std::map<std::string, std::vector<bool>> memo;
  std::function<const std::vector<bool>&(const LtlFormula&)> table =
      [&](const LtlFormula& g) -> const std::vector<bool>& {
    std::string key = g.repr();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<bool> t(n, false);
    switch (g.kind()) {
      case LtlFormula::Kind::Atom:
        for (std::size_t i = 0; i < n; ++i) t[i] = eval_formula(g.constraint(), state_at(i));
        break;
      case LtlFormula::Kind::Not: {
        const auto& a = table(g.children()[0]);
        for (std::size_t i = 0; i < n; ++i) t[i] = !a[i];
        break;
      }
      case LtlFormula::Kind::And: {
        t.assign(n, true);
        for (const auto& k : g.children()) {
          const auto& a = table(k);
          for (std::size_t i = 0; i < n; ++i) t[i] = t[i] && a[i];
        }
        break;
      }
      case LtlFormula::Kind::Or: {
        t.assign(n, false);
        for (const auto& k : g.children()) {
          const auto& a = table(k);
          for (std::size_t i = 0; i < n; ++i) t[i] = t[i] || a[i];
        }
        break;
      }
      case LtlFormula::Kind::Next: {
        const auto& a = table(g.children()[0]);
        for (std::size_t i = 0; i < n; ++i) t[i] = a[succ(i)];
        break;
      }
      case LtlFormula::Kind::Until:
      case LtlFormula::Kind::Release:
      case LtlFormula::Kind::Finally:
      case LtlFormula::Kind::Globally: {
        bool is_until = g.kind() == LtlFormula::Kind::Until;
        bool is_release = g.kind() == LtlFormula::Kind::Release;
        bool is_fin = g.kind() == LtlFormula::Kind::Finally;
        std::vector<bool> lhs(n, true), rhs;
        if (is_until || is_release) {
          lhs = table(g.children()[0]);
          rhs = table(g.children()[1]);
        } else {
          rhs = table(g.children()[0]);
          if (is_fin) lhs.assign(n, true);  // F p == true U p
        }
        // G p == false R p: lhs all false
        if (g.kind() == LtlFormula::Kind::Globally) lhs.assign(n, false);
        bool release_like = is_release || g.kind() == LtlFormula::Kind::Globally;
        // least (U/F) or greatest (R/G) fixpoint of
        //   t[i] = rhs[i] op (lhs[i] and/or t[succ(i)])
        t.assign(n, release_like);
        bool changed = true;
        while (changed) {
          changed = false;
          for (std::size_t step = 0; step < n; ++step) {
            std::size_t i = n - 1 - step;
            bool v;
            if (release_like)
              v = rhs[i] && (lhs[i] || t[succ(i)]);
            else
              v = rhs[i] || (lhs[i] && t[succ(i)]);
            if (v != t[i]) {
              t[i] = v;
              changed = true;
            }
          }
        }
        break;
      }
    }
    return memo.emplace(std::move(key), std::move(t)).first->second;
  };
  return table(f)[0];
}

}  // namespace lgs
