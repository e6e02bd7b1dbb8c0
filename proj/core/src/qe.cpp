#include "lgs/qe.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "cube.hpp"
#include "lgs/errors.hpp"
#include "qe_internal.hpp"

namespace lgs {

namespace detail {

void Budget::tick(std::size_t n) {
  ops += n;
  if (has_deadline && (ops & 0x3ff) < n) {
    if (std::chrono::steady_clock::now() > deadline)
      throw BackendError("backend timeout");
  }
}

void Budget::check_cubes(std::size_t count) const {
  if (count > max_cubes) throw BackendError("quantifier elimination exceeded cube budget");
}

namespace {

// ---- shared helpers ----------------------------------------------------

// Bound expression for `x` in atom `a` (which must mention x):
// a_x * x ~ c - rest   =>   x ~' (c - rest)/a_x  with ~' flipped for a_x < 0.
struct VarBound {
  LinExpr expr;
  Cmp cmp;
};

VarBound isolate(const LinearAtom& a, const std::string& x) {
  Rat ax = a.coeffs.at(x);
  LinExpr e;
  e.constant = a.constant / ax;
  for (const auto& [v, c] : a.coeffs) {
    if (v == x) continue;
    e.coeffs[v] = -c / ax;
  }
  return {std::move(e), ax > 0 ? a.cmp : flip_cmp(a.cmp)};
}

// numerator form: c - rest (before dividing by the x coefficient)
LinExpr numerator(const LinearAtom& a, const std::string& x) {
  LinExpr e;
  e.constant = a.constant;
  for (const auto& [v, c] : a.coeffs) {
    if (v == x) continue;
    e.coeffs[v] = -c;
  }
  return e;
}

std::vector<Cube> substitute_in_cube(const Cube& cube, const std::string& x, const LinExpr& e,
                                     const Vocabulary& vocab, const std::vector<Formula>& extra) {
  std::map<std::string, LinExpr> sub{{x, e}};
  Cube out;
  auto add_all = [&](const Formula& lit) { return out.add(lit.substitute(sub), vocab); };
  for (const auto& a : cube.atoms)
    if (!add_all(Formula::atom(a))) return {};
  for (const auto& d : cube.divs)
    if (!add_all(Formula::div(d))) return {};
  for (const auto& f : extra)
    if (!out.add(f.substitute(sub), vocab)) return {};
  if (!minimize_cube(out, vocab)) return {};
  return {std::move(out)};
}

bool mentions(const LinearAtom& a, const std::string& x) { return a.coeffs.count(x) != 0; }
bool mentions(const DivAtom& d, const std::string& x) { return d.coeffs.count(x) != 0; }

// ---- Fourier-Motzkin (Real) ---------------------------------------------

std::vector<Cube> fm_eliminate(const Cube& cube, const std::string& x, const Vocabulary& vocab,
                               Budget& budget) {
  std::vector<VarBound> lowers, uppers;
  Cube rest;
  for (const auto& d : cube.divs) {
    if (mentions(d, x)) throw BackendError("divisibility constraint over real variable '" + x + "'");
    rest.divs.push_back(d);
  }
  for (const auto& a : cube.atoms) {
    if (!mentions(a, x)) {
      rest.atoms.push_back(a);
      continue;
    }
    VarBound b = isolate(a, x);
    switch (b.cmp) {
      case Cmp::Le:
      case Cmp::Lt: uppers.push_back(std::move(b)); break;
      case Cmp::Ge:
      case Cmp::Gt: lowers.push_back(std::move(b)); break;
      default: throw LgsError("fm: equality should have been substituted");
    }
  }
  budget.tick(lowers.size() * uppers.size() + 1);
  Cube out = rest;
  for (const auto& lo : lowers)
    for (const auto& up : uppers) {
      bool strict = lo.cmp == Cmp::Gt || up.cmp == Cmp::Lt;
      Formula f = Formula::cmp_expr(lo.expr, strict ? Cmp::Lt : Cmp::Le, up.expr);
      if (!out.add(f, vocab)) return {};
    }
  if (!minimize_cube(out, vocab)) return {};
  return {std::move(out)};
}

// ---- Cooper (Int) --------------------------------------------------------

struct XiDiv {
  Int modulus;
  LinExpr inside;  // modulus | (xi + inside)
  bool negated;
};

std::vector<Cube> cooper_eliminate(const Cube& cube, const std::string& x, const Vocabulary& vocab,
                                   Budget& budget) {
  for (const auto& a : cube.atoms)
    if (mentions(a, x) && !all_int_vars(a.coeffs, vocab))
      throw BackendError("integer elimination over mixed-sort atom");
  for (const auto& d : cube.divs)
    if (mentions(d, x) && !all_int_vars(d.coeffs, vocab))
      throw BackendError("integer elimination over mixed-sort divisibility");

  Cube rest;
  std::vector<LinearAtom> xatoms;
  std::vector<DivAtom> xdivs;
  for (const auto& a : cube.atoms)
    (mentions(a, x) ? xatoms : rest.atoms).push_back(a);
  for (const auto& d : cube.divs)
    (mentions(d, x) ? xdivs : rest.divs).push_back(d);

  // lcm of |coefficients| of x (all integral after normalization)
  Int lambda(1);
  for (const auto& a : xatoms) lambda = int_lcm(lambda, rat_num(rat_abs(a.coeffs.at(x))));
  for (const auto& d : xdivs) lambda = int_lcm(lambda, rat_num(rat_abs(d.coeffs.at(x))));

  // rewrite in xi = lambda * x with coefficient +-1
  std::vector<LinExpr> lowers, uppers;
  std::vector<XiDiv> divs;
  for (const auto& a : xatoms) {
    Rat ax = a.coeffs.at(x);
    Rat m = Rat(lambda) / rat_abs(ax);  // positive integer
    LinExpr e;  // bound expression for xi
    int sign = ax > 0 ? 1 : -1;
    // sign*xi + m*rest ~ m*c  =>  xi ~' sign*(m*c - m*rest)
    e.constant = a.constant * m * sign;
    for (const auto& [v, c] : a.coeffs) {
      if (v == x) continue;
      e.coeffs[v] = -c * m * Rat(sign);
    }
    Cmp cmp = sign > 0 ? a.cmp : flip_cmp(a.cmp);
    switch (cmp) {
      case Cmp::Le: uppers.push_back(std::move(e)); break;
      case Cmp::Ge: lowers.push_back(std::move(e)); break;
      case Cmp::Lt:
        e.constant -= 1;
        uppers.push_back(std::move(e));
        break;
      case Cmp::Gt:
        e.constant += 1;
        lowers.push_back(std::move(e));
        break;
      default: throw LgsError("cooper: eq/ne should have been removed");
    }
  }
  for (const auto& d : xdivs) {
    Rat ax = d.coeffs.at(x);
    Rat m = Rat(lambda) / rat_abs(ax);
    int sign = ax > 0 ? 1 : -1;
    // m*d | sign*xi + m*e  <=>  m*d | xi + sign*m*e
    XiDiv xd;
    xd.modulus = d.modulus * Int(m.get_num());
    xd.inside.constant = d.constant * m * Rat(sign);
    for (const auto& [v, c] : d.coeffs) {
      if (v == x) continue;
      xd.inside.coeffs[v] = c * m * Rat(sign);
    }
    xd.negated = d.negated;
    divs.push_back(std::move(xd));
  }
  if (lambda != 1) divs.push_back(XiDiv{lambda, LinExpr{}, false});

  Int delta(1);
  for (const auto& d : divs) delta = int_lcm(delta, d.modulus);
  if (delta > 4096)
    throw BackendError("cooper: divisibility lcm too large (" + delta.get_str() + ")");
  long dl = delta.get_si();

  auto add_div_at = [&](Cube& c, const XiDiv& d, const LinExpr& xi_val) -> bool {
    // d.modulus | (xi_val + d.inside)
    DivAtom da;
    LinExpr e = xi_val;
    e.add(d.inside);
    da.modulus = d.modulus;
    da.coeffs = e.coeffs;
    da.constant = e.constant;
    da.negated = d.negated;
    return c.add(Formula::div(std::move(da)), vocab);
  };

  std::vector<Cube> out;
  budget.tick(static_cast<std::size_t>(dl) * (lowers.empty() ? 1 : lowers.size()));
  if (lowers.empty()) {
    // solutions unbounded below: only the divisibility residue matters
    for (long j = 0; j < dl; ++j) {
      Cube c = rest;
      bool ok = true;
      for (const auto& d : divs)
        if (!add_div_at(c, d, LinExpr::cons(Rat(j)))) {
          ok = false;
          break;
        }
      if (ok && minimize_cube(c, vocab)) out.push_back(std::move(c));
    }
    return out;
  }
  for (const auto& lo : lowers) {
    for (long j = 0; j < dl; ++j) {
      LinExpr xi = lo;
      xi.constant += j;
      Cube c = rest;
      bool ok = true;
      for (const auto& l2 : lowers)
        if (!c.add(Formula::cmp_expr(xi, Cmp::Ge, l2), vocab)) { ok = false; break; }
      if (ok)
        for (const auto& u : uppers)
          if (!c.add(Formula::cmp_expr(xi, Cmp::Le, u), vocab)) { ok = false; break; }
      if (ok)
        for (const auto& d : divs)
          if (!add_div_at(c, d, xi)) { ok = false; break; }
      if (ok && minimize_cube(c, vocab)) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

std::vector<Cube> eliminate_var_from_cube(const Cube& cube, const std::string& x,
                                          const Vocabulary& vocab, Budget& budget) {
  budget.tick();
  bool occurs = false;
  for (const auto& a : cube.atoms)
    if (mentions(a, x)) { occurs = true; break; }
  if (!occurs)
    for (const auto& d : cube.divs)
      if (mentions(d, x)) { occurs = true; break; }
  if (!occurs) return {cube};

  // one-point rule on an equality literal
  for (const auto& a : cube.atoms) {
    if (a.cmp != Cmp::Eq || !mentions(a, x)) continue;
    Rat ax = a.coeffs.at(x);
    VarBound b = isolate(a, x);
    std::vector<Formula> extra;
    if (vocab.sort(x) == Sort::Int && rat_abs(ax) != 1) {
      LinExpr num = numerator(a, x);
      DivAtom da;
      da.modulus = rat_num(rat_abs(ax));
      da.coeffs = num.coeffs;
      da.constant = num.constant;
      extra.push_back(Formula::div(std::move(da)));
    }
    return substitute_in_cube(cube, x, b.expr, vocab, extra);
  }

  // split disequalities on x
  for (std::size_t i = 0; i < cube.atoms.size(); ++i) {
    const LinearAtom& a = cube.atoms[i];
    if (a.cmp != Cmp::Ne || !mentions(a, x)) continue;
    std::vector<Cube> out;
    for (Cmp half : {Cmp::Lt, Cmp::Gt}) {
      Cube c = cube;
      c.atoms.erase(c.atoms.begin() + static_cast<std::ptrdiff_t>(i));
      LinearAtom split = a;
      split.cmp = half;
      if (!c.add(Formula::atom(split), vocab)) continue;
      if (!minimize_cube(c, vocab)) continue;
      auto sub = eliminate_var_from_cube(c, x, vocab, budget);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  }

  return vocab.sort(x) == Sort::Real ? fm_eliminate(cube, x, vocab, budget)
                                     : cooper_eliminate(cube, x, vocab, budget);
}

namespace {

// Occurrence counts used to order eliminations: cheap variables first.
std::vector<std::string> order_vars(const std::set<std::string>& vars,
                                    const std::vector<Cube>& cubes, const Vocabulary& vocab) {
  std::map<std::string, std::size_t> count;
  for (const auto& v : vars) count[v] = 0;
  for (const auto& c : cubes) {
    for (const auto& a : c.atoms)
      for (const auto& [v, co] : a.coeffs)
        if (count.count(v)) ++count[v];
    for (const auto& d : c.divs)
      for (const auto& [v, co] : d.coeffs)
        if (count.count(v)) ++count[v];
  }
  std::vector<std::string> out(vars.begin(), vars.end());
  std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
    bool ra = vocab.sort(a) == Sort::Real, rb = vocab.sort(b) == Sort::Real;
    if (ra != rb) return ra;  // reals first
    if (count[a] != count[b]) return count[a] < count[b];
    return a < b;
  });
  return out;
}

void dedupe_cubes(std::vector<Cube>& cubes) {
  std::set<std::string> seen;
  std::vector<Cube> out;
  for (auto& c : cubes) {
    std::string key = c.to_formula().repr();
    if (seen.insert(key).second) out.push_back(std::move(c));
  }
  cubes = std::move(out);
}

}  // namespace

namespace {

// Strips variables that are not free in f; returns false if none remain.
bool restrict_vars(std::set<std::string>& vars, const Formula& f) {
  std::set<std::string> fv = f.free_vars();
  for (auto it = vars.begin(); it != vars.end();)
    it = fv.count(*it) ? std::next(it) : vars.erase(it);
  return !vars.empty();
}

Formula elim_cube_base(const Formula& f, std::set<std::string> vars, const Vocabulary& vocab,
                       Budget& budget) {
  std::vector<Cube> cubes = to_cubes(f, vocab, budget.max_cubes);
  for (const auto& v : order_vars(vars, cubes, vocab)) {
    std::vector<Cube> next;
    for (const auto& c : cubes) {
      auto sub = eliminate_var_from_cube(c, v, vocab, budget);
      next.insert(next.end(), std::make_move_iterator(sub.begin()),
                  std::make_move_iterator(sub.end()));
      budget.check_cubes(next.size());
    }
    dedupe_cubes(next);
    absorb_cubes(next);
    cubes = std::move(next);
  }
  return cubes_to_formula(cubes);
}

// Lazy existential elimination: distributes over disjunctions, pulls
// var-free conjuncts out of the quantifier, applies one-point substitutions
// at every conjunction level, and case-splits on one disjunctive conjunct at
// a time so unrelated structure is never multiplied out.
Formula elim_rec(std::set<std::string> vars, Formula f, const Vocabulary& vocab, Budget& budget) {
  budget.tick();
  if (!restrict_vars(vars, f)) return f;
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return f;
    case Formula::Kind::Atom:
    case Formula::Kind::Div: return elim_cube_base(f, std::move(vars), vocab, budget);
    case Formula::Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(elim_rec(vars, k, vocab, budget));
      return Formula::disj(std::move(kids));
    }
    case Formula::Kind::And: break;
    default: throw LgsError("elim_rec expects a quantifier-free body");
  }

  // conjunction: one-point pass on equality conjuncts
  bool changed = true;
  while (changed) {
    changed = false;
    if (f.kind() != Formula::Kind::And) return elim_rec(std::move(vars), f, vocab, budget);
    for (const Formula& part : f.children()) {
      if (part.kind() != Formula::Kind::Atom) continue;
      const LinearAtom& a = part.atom_ref();
      if (a.cmp != Cmp::Eq) continue;
      std::string var;
      for (const auto& [v, c] : a.coeffs)
        if (vars.count(v)) { var = v; break; }
      if (var.empty()) continue;
      Rat ax = a.coeffs.at(var);
      VarBound b = isolate(a, var);
      std::map<std::string, LinExpr> sub{{var, b.expr}};
      Formula next = f.substitute(sub);
      if (vocab.sort(var) == Sort::Int && rat_abs(ax) != 1) {
        LinExpr num = numerator(a, var);
        DivAtom da;
        da.modulus = rat_num(rat_abs(ax));
        da.coeffs = num.coeffs;
        da.constant = num.constant;
        next = Formula::conj2(next, Formula::div(std::move(da)));
      }
      f = next;
      vars.erase(var);
      changed = true;
      budget.tick(f.node_count());
      break;
    }
    if (!restrict_vars(vars, f)) return f;
  }

  // prune disjunctive conjuncts against the literal context: branches whose
  // guards contradict facts already on this path disappear before any split
  {
    BoundCtx ctx;
    bool have_ctx = false;
    for (const auto& k : f.children())
      if (k.kind() == Formula::Kind::Atom) {
        ctx.add(k.atom_ref());
        have_ctx = true;
      }
    if (have_ctx) {
      bool changed_or = false;
      std::vector<Formula> kids;
      for (const auto& k : f.children()) {
        if (k.kind() != Formula::Kind::Or) {
          kids.push_back(k);
          continue;
        }
        std::vector<Formula> live;
        bool pruned = false;
        bool satisfied = false;
        for (const auto& d : k.children()) {
          bool dead = false;
          bool all_true = true;
          auto check_lit = [&](const Formula& lit) {
            if (lit.kind() != Formula::Kind::Atom) {
              all_true = false;
              return;
            }
            switch (ctx.eval(lit.atom_ref())) {
              case BoundCtx::Truth::False: dead = true; break;
              case BoundCtx::Truth::True: break;
              default: all_true = false; break;
            }
          };
          if (d.kind() == Formula::Kind::And)
            for (const auto& lit : d.children()) check_lit(lit);
          else
            check_lit(d);
          if (dead) {
            pruned = true;
          } else if (all_true) {
            satisfied = true;  // this conjunct already holds on the path
            break;
          } else {
            live.push_back(d);
          }
        }
        if (satisfied) {
          changed_or = true;
          continue;
        }
        if (pruned) {
          changed_or = true;
          kids.push_back(Formula::disj(std::move(live)));
        } else {
          kids.push_back(k);
        }
      }
      if (changed_or) {
        Formula g = Formula::conj(std::move(kids));
        if (g.is_false()) return g;
        return elim_rec(std::move(vars), g, vocab, budget);
      }
    }
  }

  // pull conjuncts free of the eliminated variables out of the quantifier
  std::vector<Formula> frame, active;
  bool all_literals = true;
  for (const auto& k : f.children()) {
    bool touches = false;
    for (const auto& v : k.free_vars())
      if (vars.count(v)) { touches = true; break; }
    if (!touches) {
      frame.push_back(k);
    } else {
      if (k.kind() != Formula::Kind::Atom && k.kind() != Formula::Kind::Div) all_literals = false;
      active.push_back(k);
    }
  }
  if (active.empty()) return f;
  if (!frame.empty()) {
    Formula inner = elim_rec(std::move(vars), Formula::conj(std::move(active)), vocab, budget);
    frame.push_back(inner);
    return Formula::conj(std::move(frame));
  }
  if (all_literals) return elim_cube_base(f, std::move(vars), vocab, budget);

  // Case split on one disjunctive conjunct. Prefer a disjunction whose every
  // branch pins some block variable with an equality (transition relations
  // have this shape): splitting it first turns the remaining conjuncts into
  // substitution targets instead of multiplying them out.
  auto disjunct_pins = [&](const Formula& d) {
    auto pins_atom = [&](const Formula& a) {
      if (a.kind() != Formula::Kind::Atom || a.atom_ref().cmp != Cmp::Eq) return false;
      for (const auto& [v, c] : a.atom_ref().coeffs)
        if (vars.count(v)) return true;
      return false;
    };
    if (pins_atom(d)) return true;
    if (d.kind() != Formula::Kind::And) return false;
    for (const auto& k : d.children())
      if (pins_atom(k)) return true;
    return false;
  };
  std::size_t pick = active.size();
  std::size_t best = SIZE_MAX;
  bool best_pins = false;
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (active[i].kind() != Formula::Kind::Or) continue;
    bool pins = true;
    for (const auto& d : active[i].children())
      if (!disjunct_pins(d)) {
        pins = false;
        break;
      }
    std::size_t size = active[i].children().size();
    bool better = pick == active.size() || (pins && !best_pins) ||
                  (pins == best_pins && size < best);
    if (better) {
      best = size;
      pick = i;
      best_pins = pins;
    }
  }
  if (pick == active.size()) {
    // nested And below Or-free non-literals cannot occur in flattened NNF
    return elim_cube_base(f, std::move(vars), vocab, budget);
  }
  Formula the_or = active[pick];
  active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
  std::vector<Formula> branches;
  for (const auto& d : the_or.children()) {
    std::vector<Formula> parts = active;
    parts.push_back(d);
    branches.push_back(elim_rec(vars, Formula::conj(std::move(parts)), vocab, budget));
    budget.tick(4);
  }
  return Formula::disj(std::move(branches));
}

}  // namespace

Formula eliminate_exists_block(const std::vector<std::string>& vars, const Formula& body,
                               const Vocabulary& vocab, Budget& budget) {
  std::set<std::string> vs(vars.begin(), vars.end());
  return elim_rec(std::move(vs), body, vocab, budget);
}

}  // namespace detail

// ---- public simplification ------------------------------------------------

namespace {

using detail::BoundCtx;
using detail::Cube;

enum class CubeShape { NotCube, Ok, Inconsistent };

// Child of an Or that behaves like a cube: atom, div, or conjunction of them.
CubeShape as_cube(const Formula& f, Cube& out, const Vocabulary& vocab) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Div:
      return out.add(f, vocab) ? CubeShape::Ok : CubeShape::Inconsistent;
    case Formula::Kind::And:
      for (const auto& k : f.children()) {
        if (k.kind() != Formula::Kind::Atom && k.kind() != Formula::Kind::Div)
          return CubeShape::NotCube;
        if (!out.add(k, vocab)) return CubeShape::Inconsistent;
      }
      return CubeShape::Ok;
    default: return CubeShape::NotCube;
  }
}

// literal-set view of a clause (Or of literals) or cube (And of literals)
bool literal_children(const Formula& f, Formula::Kind shell, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::Atom || f.kind() == Formula::Kind::Div) {
    out = {f};
    return true;
  }
  if (f.kind() != shell) return false;
  for (const auto& k : f.children()) {
    if (k.kind() != Formula::Kind::Atom && k.kind() != Formula::Kind::Div) return false;
    out.push_back(k);
  }
  return true;
}

// (common or p) op (common or not-p)  ->  common; same rule for cubes under
// Or. Runs a few passes; the pattern is what negating a disjunction of cubes
// produces.
std::vector<Formula> resolution_merge(std::vector<Formula> kids, Formula::Kind shell,
                                      const Vocabulary& vocab) {
  bool merged = true;
  int rounds = 0;
  while (merged && ++rounds <= 6 && kids.size() >= 2 && kids.size() <= 256) {
    merged = false;
    for (std::size_t i = 0; i < kids.size() && !merged; ++i) {
      std::vector<Formula> li;
      if (!literal_children(kids[i], shell, li)) continue;
      for (std::size_t j = i + 1; j < kids.size() && !merged; ++j) {
        std::vector<Formula> lj;
        if (!literal_children(kids[j], shell, lj)) continue;
        if (li.size() != lj.size()) continue;
        std::set<std::string> si, sj;
        for (const auto& f : li) si.insert(f.repr());
        for (const auto& f : lj) sj.insert(f.repr());
        std::vector<std::string> only_i, only_j;
        std::set_difference(si.begin(), si.end(), sj.begin(), sj.end(), std::back_inserter(only_i));
        std::set_difference(sj.begin(), sj.end(), si.begin(), si.end(), std::back_inserter(only_j));
        if (only_i.size() != 1 || only_j.size() != 1) continue;
        const Formula *fi = nullptr, *fj = nullptr;
        for (const auto& f : li)
          if (f.repr() == only_i[0]) fi = &f;
        for (const auto& f : lj)
          if (f.repr() == only_j[0]) fj = &f;
        if (fi->kind() != Formula::Kind::Atom || fj->kind() != Formula::Kind::Atom) continue;
        if (!detail::atom_complementary(fi->atom_ref(), fj->atom_ref(), vocab)) continue;
        std::vector<Formula> common;
        for (const auto& f : li)
          if (f.repr() != only_i[0]) common.push_back(f);
        Formula m = shell == Formula::Kind::Or ? Formula::disj(std::move(common))
                                               : Formula::conj(std::move(common));
        kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(j));
        kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(i));
        kids.push_back(m);
        merged = true;
      }
    }
  }
  return kids;
}

Formula simp_rec(const Formula& f, const Vocabulary& vocab, const BoundCtx& ctx) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return f;
    case Formula::Kind::Atom: {
      Formula n = detail::normalize_atom(f.atom_ref(), vocab);
      if (n.kind() != Formula::Kind::Atom) return n;
      switch (ctx.eval(n.atom_ref())) {
        case BoundCtx::Truth::True: return Formula::tru();
        case BoundCtx::Truth::False: return Formula::fals();
        default: return n;
      }
    }
    case Formula::Kind::Div: return detail::normalize_div(f.div_ref(), vocab);
    case Formula::Kind::And: {
      // gather literal facts first, then revisit the rest under the
      // strengthened context until nothing changes
      std::vector<Formula> pending = f.children();
      Cube literals;
      std::vector<Formula> others;
      for (int round = 0; round < 4; ++round) {
        BoundCtx local = ctx;
        bool localized = false;
        for (const auto& a : literals.atoms) local.add(a), localized = true;
        std::map<std::string, LinExpr> sub;
        for (const auto& [v, val] : local.pinned()) sub[v] = LinExpr::cons(val);
        std::vector<Formula> next;
        bool new_literals = false;
        for (const auto& kraw : pending) {
          Formula k = kraw;
          if (!sub.empty() && k.kind() != Formula::Kind::Atom) {
            // substitution of pinned variables collapses nested structure
            std::set<std::string> fv = k.free_vars();
            bool touches = false;
            for (const auto& [v, e] : sub)
              if (fv.count(v)) { touches = true; break; }
            if (touches) k = k.substitute(sub);
          }
          Formula sk = simp_rec(k, vocab, local);
          if (sk.is_false()) return Formula::fals();
          if (sk.is_true()) continue;
          if (sk.kind() == Formula::Kind::Atom || sk.kind() == Formula::Kind::Div) {
            if (!literals.add(sk, vocab)) return Formula::fals();
            new_literals = true;
          } else if (sk.kind() == Formula::Kind::And) {
            for (const auto& kk : sk.children()) {
              if (kk.kind() == Formula::Kind::Atom || kk.kind() == Formula::Kind::Div) {
                if (!literals.add(kk, vocab)) return Formula::fals();
                new_literals = true;
              } else {
                next.push_back(kk);
              }
            }
          } else {
            next.push_back(sk);
          }
        }
        others = next;
        (void)localized;
        if (!new_literals) break;
        pending = std::move(next);
      }
      if (!detail::minimize_cube(literals, vocab)) return Formula::fals();
      std::vector<Formula> kids;
      Formula lits = literals.to_formula();
      if (lits.is_false()) return Formula::fals();
      if (!lits.is_true()) kids.push_back(lits);
      std::set<std::string> seen;
      for (auto& o : others)
        if (seen.insert(o.repr()).second) kids.push_back(std::move(o));
      kids = resolution_merge(std::move(kids), Formula::Kind::Or, vocab);
      return Formula::conj(std::move(kids));
    }
    case Formula::Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) {
        Formula s = simp_rec(k, vocab, ctx);
        if (s.is_true()) return Formula::tru();
        if (!s.is_false()) kids.push_back(s);
      }
      kids = resolution_merge(std::move(kids), Formula::Kind::And, vocab);
      // absorption among cube-shaped children
      std::vector<Cube> cubes;
      std::vector<Formula> rest;
      for (auto& k : kids) {
        Cube c;
        switch (as_cube(k, c, vocab)) {
          case CubeShape::Ok:
            if (detail::minimize_cube(c, vocab)) cubes.push_back(std::move(c));
            break;
          case CubeShape::NotCube: rest.push_back(std::move(k)); break;
          case CubeShape::Inconsistent: break;  // false disjunct
        }
      }
      detail::absorb_cubes(cubes);
      std::vector<Formula> out;
      for (const auto& c : cubes) out.push_back(c.to_formula());
      std::set<std::string> seen;
      for (auto& r : rest)
        if (seen.insert(r.repr()).second) out.push_back(std::move(r));
      return Formula::disj(std::move(out));
    }
    case Formula::Kind::Exists:
      return Formula::exists(f.bound_vars(), simp_rec(f.body(), vocab, BoundCtx{}));
    case Formula::Kind::Forall:
      return Formula::forall(f.bound_vars(), simp_rec(f.body(), vocab, BoundCtx{}));
  }
  throw LgsError("bad kind");
}

}  // namespace

Formula simplify(const Formula& f, const Vocabulary& vocab) {
  return simp_rec(f, vocab, BoundCtx{});
}

Formula qelim(const Formula& f, const Vocabulary& vocab, detail::Budget& budget) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atom:
    case Formula::Kind::Div: return simplify(f, vocab);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> kids;
      for (const auto& k : f.children()) kids.push_back(qelim(k, vocab, budget));
      Formula g = f.kind() == Formula::Kind::And ? Formula::conj(std::move(kids))
                                                 : Formula::disj(std::move(kids));
      return simplify(g, vocab);
    }
    case Formula::Kind::Exists: {
      Formula body = qelim(f.body(), vocab, budget);
      Formula r = detail::eliminate_exists_block(f.bound_vars(), body, vocab, budget);
      return simplify(r, vocab);
    }
    case Formula::Kind::Forall: {
      Formula body = qelim(f.body(), vocab, budget);
      Formula r = detail::eliminate_exists_block(f.bound_vars(), Formula::neg(body), vocab, budget);
      return simplify(Formula::neg(simplify(r, vocab)), vocab);
    }
  }
  throw LgsError("bad kind");
}

}  // namespace lgs
