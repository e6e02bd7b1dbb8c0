#include "lgs/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "lgs/errors.hpp"

namespace lgs {

Cmp negate_cmp(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Ge;
    case Cmp::Le: return Cmp::Gt;
    case Cmp::Eq: return Cmp::Ne;
    case Cmp::Ge: return Cmp::Lt;
    case Cmp::Gt: return Cmp::Le;
    case Cmp::Ne: return Cmp::Eq;
  }
  throw LgsError("bad cmp");
}

Cmp flip_cmp(Cmp c) {
  switch (c) {
    case Cmp::Lt: return Cmp::Gt;
    case Cmp::Le: return Cmp::Ge;
    case Cmp::Gt: return Cmp::Lt;
    case Cmp::Ge: return Cmp::Le;
    default: return c;
  }
}

std::string cmp_to_string(Cmp c) {
  switch (c) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Eq: return "==";
    case Cmp::Ge: return ">=";
    case Cmp::Gt: return ">";
    case Cmp::Ne: return "!=";
  }
  throw LgsError("bad cmp");
}

LinExpr LinExpr::var(const std::string& name, const Rat& c) {
  LinExpr e;
  if (c != 0) e.coeffs[name] = c;
  return e;
}

LinExpr LinExpr::cons(const Rat& c) {
  LinExpr e;
  e.constant = c;
  return e;
}

LinExpr& LinExpr::add(const LinExpr& other, const Rat& scale) {
  for (const auto& [v, c] : other.coeffs) {
    Rat nc = coeff(v) + c * scale;
    if (nc == 0)
      coeffs.erase(v);
    else
      coeffs[v] = nc;
  }
  constant += other.constant * scale;
  return *this;
}

LinExpr LinExpr::scaled(const Rat& s) const {
  LinExpr e;
  if (s == 0) return e;
  for (const auto& [v, c] : coeffs) e.coeffs[v] = c * s;
  e.constant = constant * s;
  return e;
}

Rat LinExpr::coeff(const std::string& v) const {
  auto it = coeffs.find(v);
  return it == coeffs.end() ? Rat(0) : it->second;
}

struct Formula::Node {
  Kind kind;
  LinearAtom atom;
  DivAtom div;
  std::vector<Formula> children;
  std::vector<std::string> bound;
  // body is children[0] for quantifiers
};

namespace {
const std::shared_ptr<const Formula::Node>& true_node() {
  static auto n = std::make_shared<const Formula::Node>(Formula::Node{Formula::Kind::True, {}, {}, {}, {}});
  return n;
}
const std::shared_ptr<const Formula::Node>& false_node() {
  static auto n = std::make_shared<const Formula::Node>(Formula::Node{Formula::Kind::False, {}, {}, {}, {}});
  return n;
}
}  // namespace

Formula Formula::tru() { return Formula(true_node()); }
Formula Formula::fals() { return Formula(false_node()); }

Formula Formula::atom(LinearAtom a) {
  if (a.coeffs.empty()) {
    // ground atom: decide now
    Rat zero(0);
    bool val;
    switch (a.cmp) {
      case Cmp::Lt: val = zero < a.constant; break;
      case Cmp::Le: val = zero <= a.constant; break;
      case Cmp::Eq: val = zero == a.constant; break;
      case Cmp::Ge: val = zero >= a.constant; break;
      case Cmp::Gt: val = zero > a.constant; break;
      case Cmp::Ne: val = zero != a.constant; break;
      default: throw LgsError("bad cmp");
    }
    return boolean(val);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  return Formula(n);
}

Formula Formula::div(DivAtom d) {
  if (d.modulus <= 0) throw LgsError("divisibility modulus must be positive");
  if (d.modulus == 1) return boolean(!d.negated);
  if (d.coeffs.empty()) {
    if (!is_integer(d.constant)) return boolean(d.negated);
    bool holds = int_mod(rat_num(d.constant), d.modulus) == 0;
    return boolean(holds != d.negated);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Div;
  n->div = std::move(d);
  return Formula(n);
}

Formula Formula::cmp_expr(const LinExpr& lhs, Cmp cmp, const LinExpr& rhs) {
  LinExpr diff = lhs;
  diff.add(rhs, Rat(-1));
  LinearAtom a;
  a.coeffs = diff.coeffs;
  a.cmp = cmp;
  a.constant = -diff.constant;
  return atom(std::move(a));
}

Formula Formula::conj(std::vector<Formula> fs) {
  std::vector<Formula> kids;
  for (auto& f : fs) {
    if (f.is_false()) return fals();
    if (f.is_true()) continue;
    if (f.kind() == Kind::And) {
      for (const auto& k : f.children()) kids.push_back(k);
    } else {
      kids.push_back(f);
    }
  }
  if (kids.empty()) return tru();
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(kids);
  return Formula(n);
}

Formula Formula::disj(std::vector<Formula> fs) {
  std::vector<Formula> kids;
  for (auto& f : fs) {
    if (f.is_true()) return tru();
    if (f.is_false()) continue;
    if (f.kind() == Kind::Or) {
      for (const auto& k : f.children()) kids.push_back(k);
    } else {
      kids.push_back(f);
    }
  }
  if (kids.empty()) return fals();
  if (kids.size() == 1) return kids[0];
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(kids);
  return Formula(n);
}

Formula Formula::neg(const Formula& f) {
  switch (f.kind()) {
    case Kind::True: return fals();
    case Kind::False: return tru();
    case Kind::Atom: {
      LinearAtom a = f.atom_ref();
      a.cmp = negate_cmp(a.cmp);
      return atom(std::move(a));
    }
    case Kind::Div: {
      DivAtom d = f.div_ref();
      d.negated = !d.negated;
      return div(std::move(d));
    }
    case Kind::And: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(neg(k));
      return disj(std::move(kids));
    }
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(neg(k));
      return conj(std::move(kids));
    }
    case Kind::Exists: return forall(f.bound_vars(), neg(f.body()));
    case Kind::Forall: return exists(f.bound_vars(), neg(f.body()));
  }
  throw LgsError("bad kind");
}

Formula Formula::exists(std::vector<std::string> vars, const Formula& body) {
  std::set<std::string> fv = body.free_vars();
  std::vector<std::string> used;
  for (auto& v : vars)
    if (fv.count(v)) used.push_back(v);
  if (used.empty()) return body;
  if (body.kind() == Kind::Exists) {
    std::vector<std::string> merged = body.bound_vars();
    for (auto& v : used)
      if (std::find(merged.begin(), merged.end(), v) == merged.end()) merged.push_back(v);
    return exists(std::move(merged), body.body());
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exists;
  n->bound = std::move(used);
  n->children = {body};
  return Formula(n);
}

Formula Formula::forall(std::vector<std::string> vars, const Formula& body) {
  std::set<std::string> fv = body.free_vars();
  std::vector<std::string> used;
  for (auto& v : vars)
    if (fv.count(v)) used.push_back(v);
  if (used.empty()) return body;
  if (body.kind() == Kind::Forall) {
    std::vector<std::string> merged = body.bound_vars();
    for (auto& v : used)
      if (std::find(merged.begin(), merged.end(), v) == merged.end()) merged.push_back(v);
    return forall(std::move(merged), body.body());
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Forall;
  n->bound = std::move(used);
  n->children = {body};
  return Formula(n);
}

Formula::Kind Formula::kind() const { return node_->kind; }

bool Formula::is_quantifier_free() const {
  switch (kind()) {
    case Kind::Exists:
    case Kind::Forall: return false;
    case Kind::And:
    case Kind::Or:
      for (const auto& k : children())
        if (!k.is_quantifier_free()) return false;
      return true;
    default: return true;
  }
}

const LinearAtom& Formula::atom_ref() const {
  if (kind() != Kind::Atom) throw LgsError("not an atom");
  return node_->atom;
}

const DivAtom& Formula::div_ref() const {
  if (kind() != Kind::Div) throw LgsError("not a divisibility atom");
  return node_->div;
}

const std::vector<Formula>& Formula::children() const { return node_->children; }

const std::vector<std::string>& Formula::bound_vars() const {
  if (kind() != Kind::Exists && kind() != Kind::Forall) throw LgsError("not a quantifier");
  return node_->bound;
}

const Formula& Formula::body() const {
  if (kind() != Kind::Exists && kind() != Kind::Forall) throw LgsError("not a quantifier");
  return node_->children[0];
}

void Formula::collect_free_vars(std::set<std::string>& out) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False: return;
    case Kind::Atom:
      for (const auto& [v, c] : atom_ref().coeffs) out.insert(v);
      return;
    case Kind::Div:
      for (const auto& [v, c] : div_ref().coeffs) out.insert(v);
      return;
    case Kind::And:
    case Kind::Or:
      for (const auto& k : children()) k.collect_free_vars(out);
      return;
    case Kind::Exists:
    case Kind::Forall: {
      std::set<std::string> inner;
      body().collect_free_vars(inner);
      for (const auto& v : bound_vars()) inner.erase(v);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

std::set<std::string> Formula::free_vars() const {
  std::set<std::string> out;
  collect_free_vars(out);
  return out;
}

namespace {
template <typename M>
std::map<std::string, Rat> map_coeffs(const std::map<std::string, Rat>& coeffs, const M& name_of) {
  std::map<std::string, Rat> out;
  for (const auto& [v, c] : coeffs) {
    std::string nv = name_of(v);
    if (out.count(nv)) throw LgsError("renaming collision on '" + nv + "'");
    out[nv] = c;
  }
  return out;
}
}  // namespace

Formula Formula::rename_vars(const std::map<std::string, std::string>& map) const {
  auto name_of = [&](const std::string& v) {
    auto it = map.find(v);
    return it == map.end() ? v : it->second;
  };
  switch (kind()) {
    case Kind::True:
    case Kind::False: return *this;
    case Kind::Atom: {
      LinearAtom a = atom_ref();
      a.coeffs = map_coeffs(a.coeffs, name_of);
      return atom(std::move(a));
    }
    case Kind::Div: {
      DivAtom d = div_ref();
      d.coeffs = map_coeffs(d.coeffs, name_of);
      return div(std::move(d));
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : children()) kids.push_back(k.rename_vars(map));
      return kind() == Kind::And ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case Kind::Exists:
    case Kind::Forall: {
      std::vector<std::string> bound;
      for (const auto& v : bound_vars()) bound.push_back(name_of(v));
      Formula b = body().rename_vars(map);
      return kind() == Kind::Exists ? exists(std::move(bound), b) : forall(std::move(bound), b);
    }
  }
  throw LgsError("bad kind");
}

Formula Formula::substitute(const std::map<std::string, LinExpr>& sub) const {
  switch (kind()) {
    case Kind::True:
    case Kind::False: return *this;
    case Kind::Atom: {
      const LinearAtom& a = atom_ref();
      LinExpr lhs;
      lhs.constant = -a.constant;
      for (const auto& [v, c] : a.coeffs) {
        auto it = sub.find(v);
        if (it == sub.end())
          lhs.add(LinExpr::var(v), c);
        else
          lhs.add(it->second, c);
      }
      return cmp_expr(lhs, a.cmp, LinExpr::cons(Rat(0)));
    }
    case Kind::Div: {
      const DivAtom& d = div_ref();
      LinExpr e;
      e.constant = d.constant;
      for (const auto& [v, c] : d.coeffs) {
        auto it = sub.find(v);
        if (it == sub.end())
          e.add(LinExpr::var(v), c);
        else
          e.add(it->second, c);
      }
      DivAtom nd;
      nd.modulus = d.modulus;
      nd.coeffs = e.coeffs;
      nd.constant = e.constant;
      nd.negated = d.negated;
      return div(std::move(nd));
    }
    case Kind::And:
    case Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : children()) kids.push_back(k.substitute(sub));
      return kind() == Kind::And ? conj(std::move(kids)) : disj(std::move(kids));
    }
    case Kind::Exists:
    case Kind::Forall: {
      for (const auto& v : bound_vars())
        if (sub.count(v)) throw LgsError("substitution touches bound variable '" + v + "'");
      Formula b = body().substitute(sub);
      return kind() == Kind::Exists ? exists(bound_vars(), b) : forall(bound_vars(), b);
    }
  }
  throw LgsError("bad kind");
}

namespace {
std::string expr_to_surface(const std::map<std::string, Rat>& coeffs) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, c] : coeffs) {
    Rat ac = rat_abs(c);
    if (first) {
      if (c < 0) os << "0 - ";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (ac != 1) os << rat_to_string(ac) << "*";
    os << v;
  }
  if (first) os << "0";
  return os.str();
}
}  // namespace

std::string Formula::to_surface() const {
  switch (kind()) {
    case Kind::True: return "true";
    case Kind::False: return "false";
    case Kind::Atom: {
      const LinearAtom& a = atom_ref();
      return expr_to_surface(a.coeffs) + " " + cmp_to_string(a.cmp) + " " + rat_to_string(a.constant);
    }
    case Kind::Div: throw LgsError("divisibility atoms have no surface syntax");
    case Kind::And: {
      std::string s;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) s += " && ";
        const Formula& k = children()[i];
        bool paren = k.kind() == Kind::Or;
        s += paren ? "(" + k.to_surface() + ")" : k.to_surface();
      }
      return s;
    }
    case Kind::Or: {
      std::string s;
      for (std::size_t i = 0; i < children().size(); ++i) {
        if (i) s += " || ";
        s += children()[i].to_surface();
      }
      return s;
    }
    default: throw LgsError("quantified formulas have no surface syntax");
  }
}

std::string Formula::repr() const {
  std::ostringstream os;
  switch (kind()) {
    case Kind::True: return "T";
    case Kind::False: return "F";
    case Kind::Atom: {
      const LinearAtom& a = atom_ref();
      os << "(";
      for (const auto& [v, c] : a.coeffs) os << rat_to_string(c) << "*" << v << " ";
      os << cmp_to_string(a.cmp) << " " << rat_to_string(a.constant) << ")";
      return os.str();
    }
    case Kind::Div: {
      const DivAtom& d = div_ref();
      os << "(" << (d.negated ? "!" : "") << d.modulus.get_str() << "|";
      for (const auto& [v, c] : d.coeffs) os << rat_to_string(c) << "*" << v << " ";
      os << "+" << rat_to_string(d.constant) << ")";
      return os.str();
    }
    case Kind::And:
    case Kind::Or: {
      os << (kind() == Kind::And ? "(& " : "(| ");
      for (const auto& k : children()) os << k.repr();
      os << ")";
      return os.str();
    }
    case Kind::Exists:
    case Kind::Forall: {
      os << (kind() == Kind::Exists ? "(E " : "(A ");
      for (const auto& v : bound_vars()) os << v << " ";
      os << "." << body().repr() << ")";
      return os.str();
    }
  }
  throw LgsError("bad kind");
}

std::size_t Formula::node_count() const {
  switch (kind()) {
    case Kind::And:
    case Kind::Or: {
      std::size_t n = 1;
      for (const auto& k : children()) n += k.node_count();
      return n;
    }
    case Kind::Exists:
    case Kind::Forall: return 1 + body().node_count();
    default: return 1;
  }
}

bool Formula::structurally_equal(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::True:
    case Kind::False: return true;
    case Kind::Atom: return atom_ref() == o.atom_ref();
    case Kind::Div: return div_ref() == o.div_ref();
    case Kind::And:
    case Kind::Or: {
      if (children().size() != o.children().size()) return false;
      for (std::size_t i = 0; i < children().size(); ++i)
        if (!children()[i].structurally_equal(o.children()[i])) return false;
      return true;
    }
    case Kind::Exists:
    case Kind::Forall:
      return bound_vars() == o.bound_vars() && body().structurally_equal(o.body());
  }
  return false;
}

Rat eval_expr(const LinExpr& e, const std::map<std::string, Rat>& valuation) {
  Rat r = e.constant;
  for (const auto& [v, c] : e.coeffs) {
    auto it = valuation.find(v);
    if (it == valuation.end()) throw LgsError("valuation missing variable '" + v + "'");
    r += c * it->second;
  }
  return r;
}

bool eval_formula(const Formula& f, const std::map<std::string, Rat>& valuation) {
  switch (f.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: {
      const LinearAtom& a = f.atom_ref();
      Rat lhs(0);
      for (const auto& [v, c] : a.coeffs) {
        auto it = valuation.find(v);
        if (it == valuation.end()) throw LgsError("valuation missing variable '" + v + "'");
        lhs += c * it->second;
      }
      switch (a.cmp) {
        case Cmp::Lt: return lhs < a.constant;
        case Cmp::Le: return lhs <= a.constant;
        case Cmp::Eq: return lhs == a.constant;
        case Cmp::Ge: return lhs >= a.constant;
        case Cmp::Gt: return lhs > a.constant;
        case Cmp::Ne: return lhs != a.constant;
      }
      throw LgsError("bad cmp");
    }
    case Formula::Kind::Div: {
      const DivAtom& d = f.div_ref();
      Rat val = d.constant;
      for (const auto& [v, c] : d.coeffs) {
        auto it = valuation.find(v);
        if (it == valuation.end()) throw LgsError("valuation missing variable '" + v + "'");
        val += c * it->second;
      }
      bool holds = is_integer(val) && int_mod(rat_num(val), d.modulus) == 0;
      return holds != d.negated;
    }
    case Formula::Kind::And:
      for (const auto& k : f.children())
        if (!eval_formula(k, valuation)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& k : f.children())
        if (eval_formula(k, valuation)) return true;
      return false;
    default: throw LgsError("cannot evaluate quantified formula");
  }
}

Formula rename(const Formula& f, RenameShift shift) {
  std::set<std::string> vars = f.free_vars();
  // bound variables shift as well; collect them
  std::function<void(const Formula&)> collect_bound = [&](const Formula& g) {
    switch (g.kind()) {
      case Formula::Kind::And:
      case Formula::Kind::Or:
        for (const auto& k : g.children()) collect_bound(k);
        return;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        for (const auto& v : g.bound_vars()) vars.insert(v);
        collect_bound(g.body());
        return;
      default: return;
    }
  };
  collect_bound(f);

  std::map<std::string, std::string> map;
  for (const auto& v : vars) {
    int t = Vocabulary::tier(v);
    if (shift == RenameShift::Prime || shift == RenameShift::ToDoublePrime) {
      if (t >= 2) throw LgsError("renaming collision: cannot prime '" + v + "'");
      map[v] = v + "'";
    } else {
      if (t == 0) throw LgsError("renaming collision: cannot unprime '" + v + "'");
      map[v] = Vocabulary::shifted_down(v);
    }
  }
  return f.rename_vars(map);
}

}  // namespace lgs
