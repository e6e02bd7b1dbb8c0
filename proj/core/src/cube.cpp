#include "cube.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "lgs/errors.hpp"

namespace lgs::detail {

bool all_int_vars(const std::map<std::string, Rat>& coeffs, const Vocabulary& vocab) {
  for (const auto& [v, c] : coeffs)
    if (vocab.sort(v) != Sort::Int) return false;
  return true;
}

namespace {

// Scales coefficients to coprime integers; the constant scales along.
void integerize(std::map<std::string, Rat>& coeffs, Rat& constant) {
  Int den(1);
  for (const auto& [v, c] : coeffs) den = int_lcm(den, rat_den(c));
  if (den != 1) {
    Rat scale{den};
    for (auto& [v, c] : coeffs) c *= scale;
    constant *= scale;
  }
  Int g(0);
  for (const auto& [v, c] : coeffs) g = int_gcd(g, rat_num(c));
  if (g > 1) {
    Rat scale(Int(1), g);
    scale.canonicalize();
    for (auto& [v, c] : coeffs) c *= scale;
    constant *= scale;
  }
}

}  // namespace

Formula normalize_atom(LinearAtom a, const Vocabulary& vocab) {
  for (auto it = a.coeffs.begin(); it != a.coeffs.end();)
    it = it->second == 0 ? a.coeffs.erase(it) : std::next(it);
  if (a.coeffs.empty()) return Formula::atom(std::move(a));

  integerize(a.coeffs, a.constant);

  if (a.coeffs.begin()->second < 0) {
    for (auto& [v, c] : a.coeffs) c = -c;
    a.constant = -a.constant;
    a.cmp = flip_cmp(a.cmp);
  }

  if (all_int_vars(a.coeffs, vocab)) {
    switch (a.cmp) {
      case Cmp::Lt:
        a.cmp = Cmp::Le;
        a.constant = Rat(rat_ceil(a.constant)) - 1;
        break;
      case Cmp::Gt:
        a.cmp = Cmp::Ge;
        a.constant = Rat(rat_floor(a.constant)) + 1;
        break;
      case Cmp::Le: a.constant = Rat(rat_floor(a.constant)); break;
      case Cmp::Ge: a.constant = Rat(rat_ceil(a.constant)); break;
      case Cmp::Eq:
        if (!is_integer(a.constant)) return Formula::fals();
        break;
      case Cmp::Ne:
        if (!is_integer(a.constant)) return Formula::tru();
        break;
    }
  }
  return Formula::atom(std::move(a));
}

Formula normalize_div(DivAtom d, const Vocabulary& vocab) {
  for (auto it = d.coeffs.begin(); it != d.coeffs.end();)
    it = it->second == 0 ? d.coeffs.erase(it) : std::next(it);
  if (d.coeffs.empty()) return Formula::div(std::move(d));

  // clear denominators: d | e  <=>  L*d | L*e
  Int den(1);
  for (const auto& [v, c] : d.coeffs) den = int_lcm(den, rat_den(c));
  den = int_lcm(den, rat_den(d.constant));
  if (den != 1) {
    Rat scale{den};
    for (auto& [v, c] : d.coeffs) c *= scale;
    d.constant *= scale;
    d.modulus *= den;
  }
  // over all-integer variables, d | (e + c) needs gcd(coeffs, d) | c
  if (all_int_vars(d.coeffs, vocab)) {
    Int gc = d.modulus;
    for (const auto& [v, c] : d.coeffs) gc = int_gcd(gc, rat_num(c));
    if (is_integer(d.constant) && int_mod(rat_num(d.constant), gc) != 0)
      return Formula::boolean(d.negated);
  }
  // divide by shared content
  Int g = d.modulus;
  for (const auto& [v, c] : d.coeffs) g = int_gcd(g, rat_num(c));
  g = int_gcd(g, rat_num(d.constant));
  if (g > 1) {
    Rat scale(Int(1), g);
    scale.canonicalize();
    for (auto& [v, c] : d.coeffs) c *= scale;
    d.constant *= scale;
    d.modulus /= g;
  }
  d.constant = Rat(int_mod(rat_num(d.constant), d.modulus));
  return Formula::div(std::move(d));
}

bool Cube::add(const Formula& literal, const Vocabulary& vocab) {
  switch (literal.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom: {
      Formula n = normalize_atom(literal.atom_ref(), vocab);
      if (n.is_true()) return true;
      if (n.is_false()) return false;
      atoms.push_back(n.atom_ref());
      return true;
    }
    case Formula::Kind::Div: {
      Formula n = normalize_div(literal.div_ref(), vocab);
      if (n.is_true()) return true;
      if (n.is_false()) return false;
      divs.push_back(n.div_ref());
      return true;
    }
    default: throw LgsError("cube literal must be an atom");
  }
}

Formula Cube::to_formula() const {
  std::vector<Formula> fs;
  fs.reserve(atoms.size() + divs.size());
  for (const auto& a : atoms) fs.push_back(Formula::atom(a));
  for (const auto& d : divs) fs.push_back(Formula::div(d));
  return Formula::conj(std::move(fs));
}

namespace {

std::string vec_key(const std::map<std::string, Rat>& coeffs) {
  std::ostringstream os;
  for (const auto& [v, c] : coeffs) os << rat_to_string(c) << "*" << v << ";";
  return os.str();
}

struct Bounds {
  std::map<std::string, Rat> coeffs;
  std::optional<std::pair<Rat, bool>> lower;  // value, strict
  std::optional<std::pair<Rat, bool>> upper;
  std::optional<Rat> eq;
  std::set<std::string> ne;  // rationals as strings for set semantics
};

}  // namespace

bool minimize_cube(Cube& c, const Vocabulary& vocab) {
  std::map<std::string, Bounds> table;
  for (const auto& a : c.atoms) {
    Bounds& b = table[vec_key(a.coeffs)];
    b.coeffs = a.coeffs;
    switch (a.cmp) {
      case Cmp::Le:
      case Cmp::Lt: {
        bool strict = a.cmp == Cmp::Lt;
        if (!b.upper || a.constant < b.upper->first ||
            (a.constant == b.upper->first && strict))
          b.upper = {a.constant, strict};
        break;
      }
      case Cmp::Ge:
      case Cmp::Gt: {
        bool strict = a.cmp == Cmp::Gt;
        if (!b.lower || a.constant > b.lower->first ||
            (a.constant == b.lower->first && strict))
          b.lower = {a.constant, strict};
        break;
      }
      case Cmp::Eq:
        if (b.eq && *b.eq != a.constant) return false;
        b.eq = a.constant;
        break;
      case Cmp::Ne: b.ne.insert(rat_to_string(a.constant)); break;
    }
  }

  std::vector<LinearAtom> out;
  for (auto& [key, b] : table) {
    if (b.eq) {
      if (b.lower) {
        if (*b.eq < b.lower->first || (*b.eq == b.lower->first && b.lower->second)) return false;
      }
      if (b.upper) {
        if (*b.eq > b.upper->first || (*b.eq == b.upper->first && b.upper->second)) return false;
      }
      if (b.ne.count(rat_to_string(*b.eq))) return false;
      out.push_back(LinearAtom{b.coeffs, Cmp::Eq, *b.eq});
      continue;
    }
    if (b.lower && b.upper) {
      if (b.lower->first > b.upper->first) return false;
      if (b.lower->first == b.upper->first) {
        if (b.lower->second || b.upper->second) return false;
        // pinched to equality
        if (b.ne.count(rat_to_string(b.lower->first))) return false;
        out.push_back(LinearAtom{b.coeffs, Cmp::Eq, b.lower->first});
        continue;
      }
    }
    if (b.lower) out.push_back(LinearAtom{b.coeffs, b.lower->second ? Cmp::Gt : Cmp::Ge, b.lower->first});
    if (b.upper) out.push_back(LinearAtom{b.coeffs, b.upper->second ? Cmp::Lt : Cmp::Le, b.upper->first});
    for (const auto& n : b.ne) {
      Rat v = *parse_rational(n);
      bool redundant = (b.lower && (v < b.lower->first || (v == b.lower->first && b.lower->second))) ||
                       (b.upper && (v > b.upper->first || (v == b.upper->first && b.upper->second)));
      if (!redundant) out.push_back(LinearAtom{b.coeffs, Cmp::Ne, v});
    }
  }

  // divisibility literals: dedupe, evaluate ground ones
  std::vector<DivAtom> divs;
  std::set<std::string> seen;
  for (const auto& d : c.divs) {
    Formula n = normalize_div(d, vocab);
    if (n.is_true()) continue;
    if (n.is_false()) return false;
    Formula key = n;
    std::string r = key.repr();
    if (seen.insert(r).second) divs.push_back(n.div_ref());
  }

  c.atoms = std::move(out);
  c.divs = std::move(divs);
  return true;
}

std::vector<Cube> to_cubes(const Formula& f, const Vocabulary& vocab, std::size_t max_cubes) {
  std::vector<Cube> acc{Cube{}};
  // distribute conjuncts over accumulated cubes, depth-first on Or children
  std::function<void(const Formula&, std::vector<Cube>&)> distribute =
      [&](const Formula& g, std::vector<Cube>& cubes) {
        switch (g.kind()) {
          case Formula::Kind::True: return;
          case Formula::Kind::False: cubes.clear(); return;
          case Formula::Kind::Atom:
          case Formula::Kind::Div: {
            std::vector<Cube> next;
            next.reserve(cubes.size());
            for (auto& c : cubes) {
              Cube nc = c;
              if (nc.add(g, vocab)) next.push_back(std::move(nc));
            }
            cubes = std::move(next);
            return;
          }
          case Formula::Kind::And:
            for (const auto& k : g.children()) {
              distribute(k, cubes);
              if (cubes.empty()) return;
            }
            return;
          case Formula::Kind::Or: {
            std::vector<Cube> merged;
            for (const auto& k : g.children()) {
              std::vector<Cube> branch = cubes;
              distribute(k, branch);
              for (auto& c : branch) merged.push_back(std::move(c));
              if (merged.size() > max_cubes)
                throw BackendError("quantifier elimination exceeded cube budget", g.repr());
            }
            cubes = std::move(merged);
            return;
          }
          default: throw LgsError("to_cubes expects a quantifier-free formula");
        }
      };
  distribute(f, acc);
  std::vector<Cube> out;
  out.reserve(acc.size());
  for (auto& c : acc)
    if (minimize_cube(c, vocab)) out.push_back(std::move(c));
  return out;
}

// b => a for atoms on the same coefficient vector (canonical form assumed).
bool atom_implies(const LinearAtom& b, const LinearAtom& a) {
  if (a.coeffs != b.coeffs) return false;
  const Rat& ca = a.constant;
  const Rat& cb = b.constant;
  switch (a.cmp) {
    case Cmp::Le:
      return (b.cmp == Cmp::Le || b.cmp == Cmp::Lt || b.cmp == Cmp::Eq) && cb <= ca;
    case Cmp::Lt:
      return (b.cmp == Cmp::Lt && cb <= ca) ||
             ((b.cmp == Cmp::Le || b.cmp == Cmp::Eq) && cb < ca);
    case Cmp::Ge:
      return (b.cmp == Cmp::Ge || b.cmp == Cmp::Gt || b.cmp == Cmp::Eq) && cb >= ca;
    case Cmp::Gt:
      return (b.cmp == Cmp::Gt && cb >= ca) ||
             ((b.cmp == Cmp::Ge || b.cmp == Cmp::Eq) && cb > ca);
    case Cmp::Eq: return b.cmp == Cmp::Eq && cb == ca;
    case Cmp::Ne:
      switch (b.cmp) {
        case Cmp::Eq: return cb != ca;
        case Cmp::Ne: return cb == ca;
        case Cmp::Lt: return cb <= ca;
        case Cmp::Le: return cb < ca;
        case Cmp::Gt: return cb >= ca;
        case Cmp::Ge: return cb > ca;
        default: return false;
      }
  }
  return false;
}

// strong => weak, literal-wise: every literal of `weak` is implied by one of
// `strong`'s.
bool cube_implies(const Cube& strong, const Cube& weak) {
  for (const auto& wa : weak.atoms) {
    bool ok = false;
    for (const auto& sa : strong.atoms)
      if (atom_implies(sa, wa)) { ok = true; break; }
    if (!ok) return false;
  }
  for (const auto& wd : weak.divs) {
    bool ok = false;
    for (const auto& sd : strong.divs)
      if (sd == wd) { ok = true; break; }
    if (!ok) return false;
  }
  return true;
}

void absorb_cubes(std::vector<Cube>& cubes) {
  if (cubes.size() < 2 || cubes.size() > 1024) return;
  std::vector<bool> dead(cubes.size(), false);
  for (std::size_t i = 0; i < cubes.size(); ++i) {
    if (dead[i]) continue;
    for (std::size_t j = 0; j < cubes.size(); ++j) {
      if (i == j || dead[j] || dead[i]) continue;
      if (cube_implies(cubes[j], cubes[i])) {
        // j is the stronger disjunct: absorbed by i (ties keep the earlier)
        if (j > i || !cube_implies(cubes[i], cubes[j])) dead[j] = true;
      }
    }
  }
  std::vector<Cube> out;
  for (std::size_t i = 0; i < cubes.size(); ++i)
    if (!dead[i]) out.push_back(std::move(cubes[i]));
  cubes = std::move(out);
}

Formula cubes_to_formula(const std::vector<Cube>& cubes) {
  std::vector<Formula> ds;
  ds.reserve(cubes.size());
  for (const auto& c : cubes) ds.push_back(c.to_formula());
  return Formula::disj(std::move(ds));
}

namespace {

void subtract_rec(Cube c, const std::vector<Cube>& g, std::size_t i, const Vocabulary& vocab,
                  std::vector<Cube>& out, std::size_t max_out) {
  if (out.size() > max_out) throw BackendError("cube subtraction exceeded budget");
  if (!minimize_cube(c, vocab)) return;
  for (; i < g.size(); ++i) {
    const Cube& gc = g[i];
    // skip g-cubes that cannot meet c
    Cube merged = c;
    bool miss = false;
    for (const auto& a : gc.atoms)
      if (!merged.add(Formula::atom(a), vocab)) { miss = true; break; }
    if (!miss)
      for (const auto& d : gc.divs)
        if (!merged.add(Formula::div(d), vocab)) { miss = true; break; }
    if (!miss && !minimize_cube(merged, vocab)) miss = true;
    if (miss) continue;
    if (cube_implies(c, gc)) return;  // c entirely inside gc: nothing remains
    // split c along gc's literals
    Cube inside = c;
    for (const auto& a : gc.atoms) {
      LinearAtom neg = a;
      neg.cmp = negate_cmp(neg.cmp);
      Cube outside = inside;
      if (outside.add(Formula::atom(neg), vocab)) subtract_rec(outside, g, i + 1, vocab, out, max_out);
      if (!inside.add(Formula::atom(a), vocab)) return;
    }
    for (const auto& d : gc.divs) {
      DivAtom neg = d;
      neg.negated = !neg.negated;
      Cube outside = inside;
      if (outside.add(Formula::div(neg), vocab)) subtract_rec(outside, g, i + 1, vocab, out, max_out);
      if (!inside.add(Formula::div(d), vocab)) return;
    }
    return;  // remaining `inside` lies within gc
  }
  out.push_back(std::move(c));
}

}  // namespace

std::vector<Cube> subtract_cubes(const Cube& c, const std::vector<Cube>& g,
                                 const Vocabulary& vocab, std::size_t max_out) {
  std::vector<Cube> out;
  subtract_rec(c, g, 0, vocab, out, max_out);
  absorb_cubes(out);
  return out;
}

bool atom_complementary(const LinearAtom& a, const LinearAtom& b, const Vocabulary& vocab) {
  if (a.coeffs != b.coeffs) return false;
  // exact complement: same bound with negated comparator
  LinearAtom n = a;
  n.cmp = negate_cmp(n.cmp);
  if (n.cmp == b.cmp && n.constant == b.constant) return true;
  // integer tightening turns x > c into x >= c+1; recognize adjacent pairs
  if (all_int_vars(a.coeffs, vocab) && is_integer(a.constant) && is_integer(b.constant)) {
    if (a.cmp == Cmp::Le && b.cmp == Cmp::Ge && b.constant == a.constant + 1) return true;
    if (a.cmp == Cmp::Ge && b.cmp == Cmp::Le && a.constant == b.constant + 1) return true;
  }
  return false;
}

void BoundCtx::add(const LinearAtom& a) {
  Entry& e = table_[vec_key(a.coeffs)];
  switch (a.cmp) {
    case Cmp::Le:
    case Cmp::Lt: {
      bool strict = a.cmp == Cmp::Lt;
      if (!e.upper || a.constant < e.upper->first || (a.constant == e.upper->first && strict))
        e.upper = {a.constant, strict};
      break;
    }
    case Cmp::Ge:
    case Cmp::Gt: {
      bool strict = a.cmp == Cmp::Gt;
      if (!e.lower || a.constant > e.lower->first || (a.constant == e.lower->first && strict))
        e.lower = {a.constant, strict};
      break;
    }
    case Cmp::Eq:
      e.eq = a.constant;
      if (a.coeffs.size() == 1 && a.coeffs.begin()->second == 1)
        pinned_[a.coeffs.begin()->first] = a.constant;
      break;
    case Cmp::Ne: e.ne.insert(rat_to_string(a.constant)); break;
  }
}

BoundCtx::Truth BoundCtx::eval(const LinearAtom& a) const {
  auto it = table_.find(vec_key(a.coeffs));
  if (it == table_.end()) return Truth::Unknown;
  const Entry& e = it->second;
  const Rat& c = a.constant;
  auto tv = [](bool b) { return b ? Truth::True : Truth::False; };
  if (e.eq) {
    const Rat& v = *e.eq;
    switch (a.cmp) {
      case Cmp::Lt: return tv(v < c);
      case Cmp::Le: return tv(v <= c);
      case Cmp::Eq: return tv(v == c);
      case Cmp::Ge: return tv(v >= c);
      case Cmp::Gt: return tv(v > c);
      case Cmp::Ne: return tv(v != c);
    }
  }
  // value range [lo, up] with strict flags
  auto at_most = [&](const Rat& bound, bool allow_eq) {
    // all values <= bound (or < bound when !allow_eq)?
    if (!e.upper) return false;
    if (e.upper->first < bound) return true;
    if (e.upper->first == bound) return allow_eq || e.upper->second;
    return false;
  };
  auto at_least = [&](const Rat& bound, bool allow_eq) {
    if (!e.lower) return false;
    if (e.lower->first > bound) return true;
    if (e.lower->first == bound) return allow_eq || e.lower->second;
    return false;
  };
  switch (a.cmp) {
    case Cmp::Le:
      if (at_most(c, true)) return Truth::True;
      if (at_least(c, false)) return Truth::False;  // values > c
      return Truth::Unknown;
    case Cmp::Lt:
      if (at_most(c, false)) return Truth::True;
      if (at_least(c, true)) return Truth::False;
      return Truth::Unknown;
    case Cmp::Ge:
      if (at_least(c, true)) return Truth::True;
      if (at_most(c, false)) return Truth::False;
      return Truth::Unknown;
    case Cmp::Gt:
      if (at_least(c, false)) return Truth::True;
      if (at_most(c, true)) return Truth::False;
      return Truth::Unknown;
    case Cmp::Eq:
      if (at_most(c, false) || at_least(c, false)) return Truth::False;
      if (e.ne.count(rat_to_string(c))) return Truth::False;
      return Truth::Unknown;
    case Cmp::Ne:
      if (at_most(c, false) || at_least(c, false)) return Truth::True;
      if (e.ne.count(rat_to_string(c))) return Truth::True;
      return Truth::Unknown;
  }
  return Truth::Unknown;
}

}  // namespace lgs::detail
