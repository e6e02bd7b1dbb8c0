#include "lgs/otf.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "cube.hpp"
#include "lgs/errors.hpp"

#include <cstdlib>
#include <iostream>

namespace lgs {

std::string vector_to_string(const CountingVector& c) {
  std::ostringstream os;
  os << "⟨";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) os << ",";
    os << c[i];
  }
  os << "⟩";
  return os.str();
}

CountingVector initial_vector(const SymbolicBuchiAutomaton& a) {
  if (a.initial.size() != 1)
    throw SchemaError("counting construction needs a single-initial automaton");
  CountingVector c(static_cast<std::size_t>(a.num_states), -1);
  c[static_cast<std::size_t>(a.initial[0])] = 0;
  return c;
}

CountingVector succ_k(const CountingVector& c, const Valuation& s,
                      const SymbolicBuchiAutomaton& a, int k) {
  CountingVector out(static_cast<std::size_t>(a.num_states), -1);
  for (const auto& t : a.transitions) {
    long cp = c[static_cast<std::size_t>(t.src)];
    if (cp < 0) continue;
    if (!eval_formula(t.guard, s)) continue;
    long fin = a.is_final(t.dst) ? 1 : 0;
    long val = std::min<long>(cp + fin, k + 1);
    out[static_cast<std::size_t>(t.dst)] = std::max(out[static_cast<std::size_t>(t.dst)], val);
  }
  return out;
}

std::vector<std::string> counter_vars(const Game& g, const SymbolicBuchiAutomaton& a) {
  std::string prefix = "c";
  auto clashes = [&](const std::string& p) {
    for (int q = 0; q < a.num_states; ++q)
      if (g.vocab.contains(p + std::to_string(q))) return true;
    return false;
  };
  while (clashes(prefix)) prefix += "_";
  std::vector<std::string> out;
  for (int q = 0; q < a.num_states; ++q) out.push_back(prefix + std::to_string(q));
  return out;
}

Formula succ_k_formula(const SymbolicBuchiAutomaton& a, int k,
                       const std::vector<std::string>& counters, const Vocabulary& vocab) {
  const Rat cap(k + 1);

  // distinct guard atoms; each sign assignment over them fixes every guard,
  // so the per-letter update becomes one linear case per consistent class
  std::vector<Formula> atoms;
  {
    std::set<std::string> seen;
    std::function<void(const Formula&)> collect = [&](const Formula& f) {
      switch (f.kind()) {
        case Formula::Kind::Atom:
          if (seen.insert(detail::normalize_atom(f.atom_ref(), vocab).repr()).second)
            atoms.push_back(f);
          return;
        case Formula::Kind::And:
        case Formula::Kind::Or:
          for (const auto& c : f.children()) collect(c);
          return;
        default: return;
      }
    };
    for (const auto& t : a.transitions) collect(t.guard);
  }
  if (atoms.size() > 12) throw LgsError("automaton guards too rich for the class encoding");

  // propositional truth of a guard under a sign assignment on its atoms
  std::function<bool(const Formula&, const std::map<std::string, bool>&)> holds =
      [&](const Formula& f, const std::map<std::string, bool>& sign) -> bool {
    switch (f.kind()) {
      case Formula::Kind::True: return true;
      case Formula::Kind::False: return false;
      case Formula::Kind::Atom:
        return sign.at(detail::normalize_atom(f.atom_ref(), vocab).repr());
      case Formula::Kind::And:
        for (const auto& c : f.children())
          if (!holds(c, sign)) return false;
        return true;
      case Formula::Kind::Or:
        for (const auto& c : f.children())
          if (holds(c, sign)) return true;
        return false;
      default: throw LgsError("unexpected guard structure");
    }
  };

  SmtBackend backend(vocab);
  std::vector<Formula> classes;
  const std::size_t n = atoms.size();
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<Formula> lits;
    std::map<std::string, bool> sign;
    for (std::size_t i = 0; i < n; ++i) {
      bool pos = mask & (1u << i);
      sign[detail::normalize_atom(atoms[i].atom_ref(), vocab).repr()] = pos;
      lits.push_back(pos ? atoms[i] : Formula::neg(atoms[i]));
    }
    Formula cls = Formula::conj(lits);
    if (!backend.check(cls).sat) continue;

    std::vector<Formula> per_target{cls};
    for (int q = 0; q < a.num_states; ++q) {
      const std::string tgt = Vocabulary::primed(counters[static_cast<std::size_t>(q)]);
      const Rat fin(a.is_final(q) ? 1 : 0);
      std::vector<std::string> preds;
      for (const auto& t : a.transitions)
        if (t.dst == q && holds(t.guard, sign))
          preds.push_back(counters[static_cast<std::size_t>(t.src)]);

      auto active = [&](const std::string& p) {
        return Formula::cmp_expr(LinExpr::var(p), Cmp::Ge, LinExpr::cons(Rat(0)));
      };
      auto attains = [&](const std::string& p) {
        LinExpr contrib = LinExpr::var(p);
        contrib.constant += fin;
        Formula below = Formula::conj2(
            Formula::cmp_expr(contrib, Cmp::Le, LinExpr::cons(cap)),
            Formula::cmp_expr(LinExpr::var(tgt), Cmp::Eq, contrib));
        Formula capped = Formula::conj2(
            Formula::cmp_expr(contrib, Cmp::Ge, LinExpr::cons(cap)),
            Formula::cmp_expr(LinExpr::var(tgt), Cmp::Eq, LinExpr::cons(cap)));
        return Formula::disj2(below, capped);
      };
      auto no_larger = [&](const std::string& p, const std::string& star) {
        LinExpr star_contrib = LinExpr::var(star);
        star_contrib.constant += fin;
        return Formula::disj2(
            Formula::cmp_expr(LinExpr::var(p), Cmp::Le, LinExpr::var(star)),
            Formula::cmp_expr(star_contrib, Cmp::Ge, LinExpr::cons(cap)));
      };

      std::vector<Formula> cases;
      for (std::size_t i = 0; i < preds.size(); ++i) {
        std::vector<Formula> parts{active(preds[i]), attains(preds[i])};
        for (std::size_t j = 0; j < preds.size(); ++j) {
          if (j == i) continue;
          parts.push_back(
              Formula::disj2(Formula::neg(active(preds[j])), no_larger(preds[j], preds[i])));
        }
        cases.push_back(Formula::conj(std::move(parts)));
      }
      std::vector<Formula> none{
          Formula::cmp_expr(LinExpr::var(tgt), Cmp::Eq, LinExpr::cons(Rat(-1)))};
      for (const auto& p : preds) none.push_back(Formula::neg(active(p)));
      cases.push_back(Formula::conj(std::move(none)));
      per_target.push_back(Formula::disj(std::move(cases)));
    }
    classes.push_back(Formula::conj(std::move(per_target)));
  }
  return Formula::disj(std::move(classes));
}

namespace {

// Extends the game with the counter variables; moves are untouched here, the
// CP builder conjoins the Succ_k formulas explicitly.
Game counting_product(const Game& g, int k, const std::vector<std::string>& counters) {
  Game p;
  p.name = g.name + ".k" + std::to_string(k);
  p.variables = g.variables;
  for (const auto& v : g.variables) p.vocab.declare(v.name, v.sort);
  for (const auto& c : counters) {
    GameVariable cv;
    cv.name = c;
    cv.sort = Sort::Int;
    cv.min = Rat(-1);
    cv.max = Rat(k + 1);
    p.variables.push_back(cv);
    p.vocab.declare(c, Sort::Int, VarRole::Automaton);
  }
  p.con = g.con;
  p.env = g.env;
  p.player = g.player;
  return p;
}

Formula counters_safe(const std::vector<std::string>& counters, int k, int tier) {
  std::vector<Formula> parts;
  for (const auto& c : counters) {
    std::string name = c;
    for (int t = 0; t < tier; ++t) name = Vocabulary::primed(name);
    parts.push_back(Formula::cmp_expr(LinExpr::var(name), Cmp::Le, LinExpr::cons(Rat(k))));
  }
  return Formula::conj(std::move(parts));
}

Formula substitute_vector(const Formula& f, const std::vector<std::string>& counters,
                          const CountingVector& c, const Vocabulary& vocab) {
  std::map<std::string, LinExpr> sub;
  for (std::size_t i = 0; i < counters.size(); ++i)
    sub[counters[i]] = LinExpr::cons(Rat(c[i]));
  return simplify(f.substitute(sub), vocab);
}

}  // namespace

KSolve solve_k(const Game& g, const SymbolicBuchiAutomaton& a, int k, Perspective persp,
               const EngineOptions& opts) {
  SymbolicBuchiAutomaton aut = a;
  aut.validate();
  if (aut.initial.size() != 1)
    throw SchemaError("solve_k requires a single-initial automaton");

  KSolve res;
  res.counters = counter_vars(g, a);
  res.product = counting_product(g, k, res.counters);
  const Game& p = res.product;
  SmtBackend backend(p.vocab);

  std::vector<std::string> primed1, primed2;
  for (const auto& v : p.state_vars()) {
    primed1.push_back(Vocabulary::primed(v));
    primed2.push_back(Vocabulary::doubleprimed(v));
  }
  Formula dom0 = p.domain(0);
  Formula dom1 = p.domain(1);
  Formula dom2 = p.domain(2);
  Formula safe0 = Formula::conj2(counters_safe(res.counters, k, 0), dom0);
  Formula safe1 = counters_safe(res.counters, k, 1);
  Formula succ01 = succ_k_formula(a, k, res.counters, p.vocab);   // Succ_k(c, V, c')
  Formula succ12 = rename(succ01, RenameShift::Prime);            // Succ_k(c', V', c'')
  Formula env12 = rename(g.env, RenameShift::Prime);              // Env(V', V'')

  const bool controller = persp == Perspective::Controller;
  auto cp_k = [&](const Formula& x) {
    Formula x2 = rename(rename(x, RenameShift::Prime), RenameShift::Prime);
    if (controller) {
      Formula inner = Formula::forall(
          primed2, Formula::implies(Formula::conj({dom2, env12, succ12}), x2));
      return Formula::conj2(
          safe0, Formula::exists(primed1, Formula::conj({dom1, g.con, succ01, safe1, inner})));
    }
    Formula inner =
        Formula::exists(primed2, Formula::conj({dom2, env12, succ12, x2}));
    return Formula::conj2(
        safe0, Formula::forall(primed1, Formula::implies(Formula::conj({dom1, g.con, succ01}),
                                                         Formula::conj2(safe1, inner))));
  };

  static const bool trace = std::getenv("LGS_TRACE") != nullptr;
  Formula x = backend.simplify(safe0);
  bool converged = false;
  while (res.iterations < opts.iteration_cap) {
    ++res.iterations;
    Formula x_old = x;
    if (trace) std::cerr << "[solve_k] iter " << res.iterations << " qelim..." << std::endl;
    x = backend.qelim(cp_k(x_old));
    if (trace) std::cerr << "[solve_k] nodes=" << x.node_count() << " entails..." << std::endl;
    if (backend.entails(x_old, x)) {
      converged = true;
      x = x_old;
      break;
    }
  }
  res.region = x;
  res.status = converged ? SolveStatus::Converged : SolveStatus::CapExceeded;
  res.at_initial = substitute_vector(x, res.counters, initial_vector(a), p.vocab);
  return res;
}

OtfResult otf_loop(const Game& g, const SymbolicBuchiAutomaton& a_psi,
                   const SymbolicBuchiAutomaton& a_negpsi, SmtBackend& backend,
                   const OtfOptions& opts) {
  OtfResult res;
  res.status = OtfStatus::KCapReached;
  Perspective mine = perspective_of(g.player);
  Perspective theirs =
      mine == Perspective::Controller ? Perspective::Environment : Perspective::Controller;
  for (int k = 0; k <= opts.k_max; ++k) {
    KSolve under = solve_k(g, a_negpsi, k, mine, opts.engine);
    KSolve over = solve_k(g, a_psi, k, theirs, opts.engine);
    if (under.status == SolveStatus::CapExceeded || over.status == SolveStatus::CapExceeded) {
      res.status = OtfStatus::FixpointCapReached;
      res.k_used = k;
      return res;
    }
    Formula wu = under.at_initial;
    Formula wo = backend.simplify(
        Formula::conj2(g.domain(0), Formula::neg(over.at_initial)));
    if (!res.under_by_k.empty() && !backend.entails(res.under_by_k.back(), wu))
      res.violations.push_back("W_U shrank from k=" + std::to_string(k - 1) + " to k=" +
                               std::to_string(k));
    res.under_by_k.push_back(wu);
    res.over_by_k.push_back(wo);
    res.under = wu;
    res.over = wo;
    res.k_used = k;
    if (!backend.entails(wu, wo))
      res.violations.push_back("W_U not below W_O at k=" + std::to_string(k));
    if (backend.equivalent(wu, wo)) {
      res.status = OtfStatus::Converged;
      res.winning_solve = std::move(under);
      return res;
    }
    if (k == opts.k_max) res.winning_solve = std::move(under);
  }
  return res;
}

std::pair<Valuation, CountingVector> dest_pair(const std::vector<Valuation>& play,
                                               const SymbolicBuchiAutomaton& a, int k) {
  if (play.empty()) throw LgsError("dest_pair needs a nonempty play");
  CountingVector c = initial_vector(a);
  for (std::size_t i = 0; i + 1 < play.size(); ++i) c = succ_k(c, play[i], a, k);
  return {play.back(), c};
}

Formula otf_strategy_moves(const KSolve& solve, const SymbolicBuchiAutomaton& a, int k,
                           const Valuation& s1, const CountingVector& c1, SmtBackend& backend) {
  const Game& p = solve.product;
  // the counter step is a function of (c1, s1); compute it concretely
  CountingVector c2 = succ_k(c1, s1, a, k);
  std::map<std::string, LinExpr> sub;
  for (const auto& [v, val] : s1) sub[v] = LinExpr::cons(val);
  for (std::size_t i = 0; i < solve.counters.size(); ++i)
    sub[solve.counters[i]] = LinExpr::cons(Rat(c1[i]));
  Formula con_here = p.con.substitute(sub);  // over V' only
  // region at the successor: W(V', c2)
  std::map<std::string, LinExpr> wsub;
  for (std::size_t i = 0; i < solve.counters.size(); ++i)
    wsub[solve.counters[i]] = LinExpr::cons(Rat(c2[i]));
  Formula w_next = rename(solve.region.substitute(wsub), RenameShift::Prime);
  Formula moves = Formula::conj({p.domain(1), con_here, w_next});
  // express over unprimed V
  std::map<std::string, std::string> down;
  for (const auto& v : p.state_vars()) down[Vocabulary::primed(v)] = v;
  return backend.simplify(moves.rename_vars(down));
}

}  // namespace lgs
