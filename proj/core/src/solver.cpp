#include "lgs/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>

#include "cube.hpp"
#include "lgs/errors.hpp"
#include "qe_internal.hpp"

namespace lgs {

namespace {

using detail::Budget;
using detail::Cube;
using detail::cube_implies;

// Depth-first satisfiability of a cube: eliminate variables one at a time,
// descending into the disjunctions Cooper produces, stopping at the first
// ground-consistent leaf.
bool cube_sat(const Cube& cube, const Vocabulary& vocab, Budget& budget) {
  Cube c = cube;
  if (!detail::minimize_cube(c, vocab)) return false;
  std::set<std::string> vars;
  for (const auto& a : c.atoms)
    for (const auto& [v, co] : a.coeffs) vars.insert(v);
  for (const auto& d : c.divs)
    for (const auto& [v, co] : d.coeffs) vars.insert(v);
  if (vars.empty()) return true;  // ground literals folded during add/minimize
  // prefer a variable with an equality (one-point), else fewest occurrences
  std::string pick;
  std::map<std::string, std::size_t> count;
  for (const auto& a : c.atoms)
    for (const auto& [v, co] : a.coeffs) {
      ++count[v];
      if (a.cmp == Cmp::Eq && pick.empty()) pick = v;
    }
  for (const auto& d : c.divs)
    for (const auto& [v, co] : d.coeffs) ++count[v];
  if (pick.empty()) {
    std::size_t best = SIZE_MAX;
    for (const auto& v : vars) {
      std::size_t n = count.count(v) ? count[v] : 0;
      bool real = vocab.sort(v) == Sort::Real;
      std::size_t score = n * 2 + (real ? 0 : 1);
      if (score < best) {
        best = score;
        pick = v;
      }
    }
  }
  for (const auto& child : detail::eliminate_var_from_cube(c, pick, vocab, budget))
    if (cube_sat(child, vocab, budget)) return true;
  return false;
}

// Lazy DNF walk: explores one cube at a time so that a satisfiable branch is
// found without materializing the whole expansion. The accumulated bound
// context prunes contradictory branches as soon as a literal is added.
bool sat_walk(std::vector<Formula> work, Cube cube, detail::BoundCtx ctx, const Vocabulary& vocab,
              Budget& budget, Cube& witness) {
  budget.tick();
  while (!work.empty()) {
    Formula g = work.back();
    work.pop_back();
    switch (g.kind()) {
      case Formula::Kind::True: continue;
      case Formula::Kind::False: return false;
      case Formula::Kind::Atom: {
        Formula n = detail::normalize_atom(g.atom_ref(), vocab);
        if (n.is_true()) continue;
        if (n.is_false()) return false;
        switch (ctx.eval(n.atom_ref())) {
          case detail::BoundCtx::Truth::True: continue;
          case detail::BoundCtx::Truth::False: return false;
          default: break;
        }
        ctx.add(n.atom_ref());
        cube.atoms.push_back(n.atom_ref());
        continue;
      }
      case Formula::Kind::Div:
        if (!cube.add(g, vocab)) return false;
        continue;
      case Formula::Kind::And: {
        // literals before disjunctions so the context prunes branches early
        std::vector<const Formula*> ors;
        for (const auto& k : g.children())
          if (k.kind() == Formula::Kind::Or) ors.push_back(&k);
        for (const auto* k : ors) work.push_back(*k);
        for (const auto& k : g.children())
          if (k.kind() != Formula::Kind::Or) work.push_back(k);
        continue;
      }
      case Formula::Kind::Or: {
        for (const auto& k : g.children()) {
          std::vector<Formula> w = work;
          w.push_back(k);
          if (sat_walk(std::move(w), cube, ctx, vocab, budget, witness)) return true;
        }
        return false;
      }
      default: throw LgsError("sat_walk expects a quantifier-free formula");
    }
  }
  if (!cube_sat(cube, vocab, budget)) return false;
  witness = std::move(cube);
  return true;
}

// Value of a one-variable quantifier-free formula, known satisfiable.
Rat pick_value(const Formula& f, const std::string& var, Sort sort) {
  std::vector<Rat> boundaries;
  Int divlcm(1);
  std::function<void(const Formula&)> scan = [&](const Formula& g) {
    switch (g.kind()) {
      case Formula::Kind::Atom: {
        const LinearAtom& a = g.atom_ref();
        auto it = a.coeffs.find(var);
        if (it != a.coeffs.end()) boundaries.push_back(a.constant / it->second);
        return;
      }
      case Formula::Kind::Div: divlcm = int_lcm(divlcm, g.div_ref().modulus); return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        for (const auto& k : g.children()) scan(k);
        return;
      default: return;
    }
  };
  scan(f);

  std::vector<Rat> candidates;
  candidates.push_back(Rat(0));
  if (sort == Sort::Real) {
    std::sort(boundaries.begin(), boundaries.end());
    boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());
    for (const auto& b : boundaries) candidates.push_back(b);
    for (std::size_t i = 0; i + 1 < boundaries.size(); ++i)
      candidates.push_back((boundaries[i] + boundaries[i + 1]) / 2);
    if (!boundaries.empty()) {
      candidates.push_back(boundaries.front() - 1);
      candidates.push_back(boundaries.back() + 1);
    }
  } else {
    if (divlcm > 4096) throw BackendError("model extraction: divisibility lcm too large");
    long L = std::max(1l, divlcm.get_si());
    std::vector<Rat> base{Rat(0)};
    for (const auto& b : boundaries) {
      base.push_back(Rat(rat_floor(b)));
      base.push_back(Rat(rat_ceil(b)));
    }
    for (const auto& c : base)
      for (long j = -1; j <= L; ++j) candidates.push_back(c + j);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto& v : candidates)
    if (eval_formula(f, {{var, v}})) return v;
  throw LgsError("model extraction failed for '" + var + "'");
}

}  // namespace

detail::Budget SmtBackend::fresh_budget() const {
  detail::Budget b{limits_.max_cubes};
  if (limits_.timeout_ms > 0) {
    b.has_deadline = true;
    b.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(limits_.timeout_ms);
  }
  return b;
}

Formula SmtBackend::qelim(const Formula& f) {
  ++stats_.qelim_calls;
  detail::Budget budget = fresh_budget();
  try {
    Formula r = lgs::qelim(f, *vocab_, budget);
    // canonicalize to an absorbed disjunction of cubes when that stays small;
    // iterated regions otherwise accumulate alternation depth
    if (r.is_quantifier_free() && !r.is_true() && !r.is_false()) {
      try {
        std::vector<Cube> cubes = detail::to_cubes(r, *vocab_, 1024);
        detail::absorb_cubes(cubes);
        return detail::cubes_to_formula(cubes);
      } catch (const BackendError&) {
        // expansion too large: keep the structured form
      }
    }
    return r;
  } catch (BackendError& e) {
    if (e.offending_formula.empty()) throw BackendError(e.what(), f.repr());
    throw;
  }
}

SatResult SmtBackend::check(const Formula& f) {
  ++stats_.check_calls;
  detail::Budget budget = fresh_budget();
  Formula qf = f.is_quantifier_free() ? lgs::simplify(f, *vocab_) : lgs::qelim(f, *vocab_, budget);

  Cube witness;
  if (!sat_walk({qf}, Cube{}, detail::BoundCtx{}, *vocab_, budget, witness))
    return SatResult{false, {}};

  // model extraction from the witnessing cube by projection and back-substitution
  SatResult res;
  res.sat = true;
  Formula g = witness.to_formula();
  std::set<std::string> fv = f.free_vars();
  std::vector<std::string> order(fv.begin(), fv.end());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::string& v = order[i];
    std::vector<std::string> later(order.begin() + static_cast<std::ptrdiff_t>(i) + 1, order.end());
    std::map<std::string, LinExpr> sub;
    for (const auto& [mv, mval] : res.model) sub[mv] = LinExpr::cons(mval);
    Formula h = g.substitute(sub);
    Formula proj = detail::eliminate_exists_block(later, h, *vocab_, budget);
    proj = lgs::simplify(proj, *vocab_);
    if (!proj.free_vars().count(v)) {
      // variable unconstrained: any sort-respecting value works
      res.model[v] = Rat(0);
      continue;
    }
    res.model[v] = pick_value(proj, v, vocab_->sort(v));
  }
  // witness cube may not mention every free variable of f
  for (const auto& v : fv)
    if (!res.model.count(v)) res.model[v] = Rat(0);
  return res;
}

namespace {

// Exact satisfiability of one cube by variable elimination.
bool cube_consistent(const Cube& cube, const Vocabulary& vocab, Budget& budget) {
  return cube_sat(cube, vocab, budget);
}

}  // namespace

bool SmtBackend::entails(const Formula& f, const Formula& g) {
  if (f.is_quantifier_free() && g.is_quantifier_free()) {
    detail::Budget budget = fresh_budget();
    try {
      std::vector<Cube> fc = detail::to_cubes(f, *vocab_, 4096);
      std::vector<Cube> gc = detail::to_cubes(g, *vocab_, 4096);
      for (const auto& c : fc) {
        for (const auto& piece : detail::subtract_cubes(c, gc, *vocab_, 8192))
          if (cube_consistent(piece, *vocab_, budget)) return false;
      }
      return true;
    } catch (const BackendError&) {
      // expansion too large: fall through to the generic path
    }
  }
  return !check(Formula::conj2(f, Formula::neg(g))).sat;
}

Formula SmtBackend::diff_regions(const Formula& a, const Formula& b) {
  detail::Budget budget = fresh_budget();
  try {
    std::vector<Cube> ac = detail::to_cubes(a, *vocab_, 4096);
    std::vector<Cube> bc = detail::to_cubes(b, *vocab_, 4096);
    std::vector<Cube> pieces;
    for (const auto& c : ac)
      for (auto& piece : detail::subtract_cubes(c, bc, *vocab_, 8192))
        if (cube_consistent(piece, *vocab_, budget)) pieces.push_back(std::move(piece));
    detail::absorb_cubes(pieces);
    return detail::cubes_to_formula(pieces);
  } catch (const BackendError&) {
    return qelim(Formula::conj2(a, Formula::neg(b)));
  }
}

bool SmtBackend::equivalent(const Formula& f, const Formula& g) {
  return entails(f, g) && entails(g, f);
}

}  // namespace lgs
