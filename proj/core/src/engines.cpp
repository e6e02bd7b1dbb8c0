#include "lgs/engines.hpp"

#include <sstream>

#include "lgs/errors.hpp"

#include <cstdlib>
#include <iostream>

namespace lgs {

namespace {

bool trace_on() {
  static bool on = std::getenv("LGS_TRACE") != nullptr;
  return on;
}
#define LGS_TRACE_MSG(msg) \
  do { if (trace_on()) std::cerr << "[engine] " << msg << std::endl; } while (0)

std::string describe(const char* what, int iter) {
  std::ostringstream os;
  os << what << " at iteration " << iter;
  return os.str();
}

// e0 --U_i--> c_i --true--> e0 over the winning region.
StrategyAutomaton memoryless_strategy(const Formula& region,
                                      const std::vector<std::pair<Formula, Formula>>& moves) {
  StrategyAutomaton s;
  s.env_states.push_back({0, region});
  s.initial_env = 0;
  for (const auto& [u, label] : moves) {
    int id = static_cast<int>(s.ctrl_states.size());
    s.ctrl_states.push_back({id, label});
    s.env_to_ctrl.push_back({0, u, id});
    s.ctrl_to_env.push_back({id, Formula::tru(), 0});
  }
  return s;
}

Formula step_c_move(const Game& g, const Formula& move, const Formula& y) {
  std::vector<std::string> primed;
  for (const auto& v : g.state_vars()) primed.push_back(Vocabulary::primed(v));
  return Formula::exists(primed,
                         Formula::conj({g.domain(1), move, rename(y, RenameShift::Prime)}));
}

// U_i for the safety strategy: stay inside `core` with move i against every
// reply. Maximally permissive: all preserving moves are offered.
std::vector<std::pair<Formula, Formula>> safety_moves(const Game& g,
                                                      const std::vector<Formula>& moves,
                                                      const Formula& core, SmtBackend& backend,
                                                      SolveArtifacts& art) {
  std::vector<std::pair<Formula, Formula>> out;
  std::vector<Formula> cover;
  for (const auto& m : moves) {
    Formula cp = build_cp(g, CpSpec::safe_per_move(core, m), Perspective::Controller, core);
    Formula u = backend.qelim(Formula::conj2(core, cp));
    if (u.is_false()) continue;
    cover.push_back(u);
    out.push_back({u, backend.simplify(Formula::conj2(m, u))});
  }
  if (!backend.entails(core, Formula::disj(cover)))
    art.violations.push_back("safety strategy does not cover the winning region");
  return out;
}

void check_frontier_disjoint(const std::vector<Formula>& frontier, SmtBackend& backend,
                             SolveArtifacts& art) {
  for (std::size_t i = 0; i < frontier.size(); ++i)
    for (std::size_t j = i + 1; j < frontier.size(); ++j)
      if (backend.check(Formula::conj2(frontier[i], frontier[j])).sat) {
        art.violations.push_back("frontier layers " + std::to_string(i) + " and " +
                                 std::to_string(j) + " overlap");
        return;
      }
}

SpecClass require_class(const Game& g, SpecClass::Kind kind, const char* engine) {
  SpecClass cls = classify(g.objective);
  if (cls.kind != kind)
    throw LgsError(std::string(engine) + ": objective is not of the required simple shape");
  return cls;
}

}  // namespace

SolveResult solve_safety(const Game& g, Perspective persp, SmtBackend& backend,
                         const EngineOptions& opts) {
  SpecClass cls = require_class(g, SpecClass::Kind::Safety, "solve_safety");
  SolveResult res;
  Formula x = backend.simplify(Formula::conj2(cls.predicate, g.domain(0)));
  if (!backend.check(x).sat) {
    res.region = Formula::fals();
    res.artifacts.iterates = {res.region};
    return res;
  }

  Formula w = x;
  res.artifacts.iterates.push_back(w);
  bool converged = false;
  while (res.artifacts.iterations < opts.iteration_cap) {
    ++res.artifacts.iterations;
    Formula w_old = w;
    w = backend.qelim(Formula::conj2(build_cp(g, CpSpec::safe(x), persp, w_old), x));
    res.artifacts.iterates.push_back(w);
    if (!backend.entails(w, w_old))
      res.artifacts.violations.push_back(describe("safety chain grew", res.artifacts.iterations));
    if (backend.entails(w_old, w)) {
      converged = true;
      break;
    }
  }
  res.region = w;
  if (!converged) {
    res.status = SolveStatus::CapExceeded;
    res.approx = Approx::Over;
    return res;
  }

  if (opts.want_strategy && persp == Perspective::Controller) {
    auto moves = fnd_moves(g.con, g, backend);
    if (moves && !w.is_false())
      res.strategy = memoryless_strategy(w, safety_moves(g, *moves, w, backend, res.artifacts));
  }
  return res;
}

SolveResult solve_reachability(const Game& g, Perspective persp, SmtBackend& backend,
                               const EngineOptions& opts) {
  SpecClass cls = require_class(g, SpecClass::Kind::Reachability, "solve_reachability");
  SolveResult res;
  Formula dom = g.domain(0);
  Formula x = backend.simplify(Formula::conj2(cls.predicate, dom));

  Formula w = x;
  res.artifacts.iterates.push_back(w);
  res.artifacts.frontier.push_back(x);
  bool converged = backend.entails(dom, cls.predicate);  // valid target: done at once
  while (!converged && res.artifacts.iterations < opts.iteration_cap) {
    ++res.artifacts.iterations;
    Formula w_old = w;
    w = backend.qelim(
        Formula::conj2(Formula::disj2(build_cp(g, CpSpec::reach(x), persp, w_old), x), dom));
    res.artifacts.iterates.push_back(w);
    if (!backend.entails(w_old, w))
      res.artifacts.violations.push_back(describe("reachability chain shrank", res.artifacts.iterations));
    Formula layer = backend.diff_regions(w, w_old);
    if (backend.entails(w, w_old)) {
      converged = true;
      break;
    }
    res.artifacts.frontier.push_back(layer);
  }
  res.region = w;
  if (!converged) {
    res.status = SolveStatus::CapExceeded;
    res.approx = Approx::Under;
    return res;
  }

  if (opts.want_strategy && persp == Perspective::Controller) {
    auto moves = fnd_moves(g.con, g, backend);
    if (moves && !w.is_false()) {
      check_frontier_disjoint(res.artifacts.frontier, backend, res.artifacts);
      const auto& c = res.artifacts.frontier;
      const auto& iter = res.artifacts.iterates;  // iter[j] == C_0 | ... | C_j
      std::vector<std::vector<Formula>> parts(moves->size());
      for (std::size_t mi = 0; mi < moves->size(); ++mi)
        parts[mi].push_back(c[0]);  // any legal move once the target is hit
      for (std::size_t j = 0; j + 1 < c.size(); ++j) {
        std::vector<Formula> rank_cover;
        for (std::size_t mi = 0; mi < moves->size(); ++mi) {
          Formula cp = backend.qelim(build_cp(g, CpSpec::reach_per_move(iter[j], (*moves)[mi]),
                                              Perspective::Controller, iter[j]));
          rank_cover.push_back(cp);
          parts[mi].push_back(Formula::conj2(c[j + 1], cp));
        }
        // every layer state must have a rank-decreasing move
        if (!backend.entails(c[j + 1], Formula::disj(std::move(rank_cover))))
          res.artifacts.violations.push_back("reachability strategy misses layer " +
                                             std::to_string(j + 1));
      }
      std::vector<std::pair<Formula, Formula>> us;
      for (std::size_t mi = 0; mi < moves->size(); ++mi) {
        Formula u = backend.qelim(Formula::disj(std::move(parts[mi])));
        if (u.is_false()) continue;
        us.push_back({u, backend.simplify(Formula::conj2((*moves)[mi], u))});
      }
      res.strategy = memoryless_strategy(w, us);
    }
  }
  return res;
}

SolveResult solve_cobuchi(const Game& g, Perspective persp, SmtBackend& backend,
                          const EngineOptions& opts) {
  SpecClass cls = require_class(g, SpecClass::Kind::CoBuchi, "solve_cobuchi");
  SolveResult res;
  Formula dom = g.domain(0);
  Formula x = backend.simplify(Formula::conj2(cls.predicate, dom));

  // phase 1: largest subregion of X the protagonist can keep inside X
  Formula core = x;
  bool core_converged = !backend.check(x).sat;
  if (core_converged) core = Formula::fals();
  while (!core_converged && res.artifacts.iterations < opts.iteration_cap) {
    ++res.artifacts.iterations;
    Formula old = core;
    core = backend.qelim(Formula::conj2(build_cp(g, CpSpec::safe(x), persp, old), x));
    if (!backend.entails(core, old))
      res.artifacts.violations.push_back(describe("co-Buchi safety chain grew", res.artifacts.iterations));
    if (backend.entails(old, core)) {
      core_converged = true;
      core = old;
    }
  }
  res.artifacts.safety_core = core;
  if (!core_converged) {
    res.region = core;
    res.status = SolveStatus::CapExceeded;
    res.approx = Approx::Unknown;
    return res;
  }

  // phase 2: attractor of the core under the plain predecessor
  Formula w = core;
  res.artifacts.iterates.push_back(w);
  res.artifacts.frontier.push_back(core);
  bool converged = w.is_false();  // empty core: nothing to reach
  if (converged) res.region = Formula::fals();
  while (!converged && res.artifacts.iterations < opts.iteration_cap) {
    ++res.artifacts.iterations;
    Formula w_old = w;
    w = backend.qelim(
        Formula::conj2(Formula::disj2(build_cp(g, CpSpec::plain(), persp, w_old), core), dom));
    res.artifacts.iterates.push_back(w);
    if (!backend.entails(w_old, w))
      res.artifacts.violations.push_back(describe("co-Buchi attractor shrank", res.artifacts.iterations));
    Formula layer = backend.diff_regions(w, w_old);
    if (backend.entails(w, w_old)) {
      converged = true;
      break;
    }
    res.artifacts.frontier.push_back(layer);
  }
  res.region = w;
  if (!converged) {
    res.status = SolveStatus::CapExceeded;
    res.approx = Approx::Under;
    return res;
  }

  if (opts.want_strategy && persp == Perspective::Controller && !w.is_false()) {
    auto moves = fnd_moves(g.con, g, backend);
    if (moves) {
      check_frontier_disjoint(res.artifacts.frontier, backend, res.artifacts);
      const auto& c = res.artifacts.frontier;
      const auto& iter = res.artifacts.iterates;
      std::vector<std::vector<Formula>> parts(moves->size());
      std::vector<Formula> core_cover;
      for (std::size_t mi = 0; mi < moves->size(); ++mi) {
        Formula u_safe = backend.qelim(Formula::conj2(
            core, build_cp(g, CpSpec::safe_per_move(core, (*moves)[mi]), Perspective::Controller,
                           core)));
        core_cover.push_back(u_safe);
        parts[mi].push_back(u_safe);
      }
      if (!backend.entails(core, Formula::disj(std::move(core_cover))))
        res.artifacts.violations.push_back("co-Buchi strategy misses the safety core");
      for (std::size_t j = 0; j + 1 < c.size(); ++j) {
        std::vector<Formula> rank_cover;
        for (std::size_t mi = 0; mi < moves->size(); ++mi) {
          Formula cp =
              backend.qelim(build_cp(g, CpSpec::reach_per_move(Formula::fals(), (*moves)[mi]),
                                     Perspective::Controller, iter[j]));
          rank_cover.push_back(cp);
          parts[mi].push_back(Formula::conj2(c[j + 1], cp));
        }
        if (!backend.entails(c[j + 1], Formula::disj(std::move(rank_cover))))
          res.artifacts.violations.push_back("co-Buchi strategy misses layer " +
                                             std::to_string(j + 1));
      }
      std::vector<std::pair<Formula, Formula>> us;
      for (std::size_t mi = 0; mi < moves->size(); ++mi) {
        Formula u = backend.qelim(Formula::disj(std::move(parts[mi])));
        if (u.is_false()) continue;
        us.push_back({u, backend.simplify(Formula::conj2((*moves)[mi], u))});
      }
      res.strategy = memoryless_strategy(w, us);
    }
  }
  return res;
}

SolveResult solve_buchi(const Game& g, Perspective persp, SmtBackend& backend,
                        const EngineOptions& opts) {
  SpecClass cls = require_class(g, SpecClass::Kind::Buchi, "solve_buchi");
  SolveResult res;
  Formula dom = g.domain(0);
  Formula x = backend.simplify(Formula::conj2(cls.predicate, dom));
  if (!backend.check(x).sat) {
    res.region = Formula::fals();
    res.artifacts.iterates = {res.region};
    return res;
  }

  Formula w = dom, we = dom;
  Formula w0 = dom, we0 = dom;
  res.artifacts.iterates.push_back(w);
  bool converged = false;
  while (res.artifacts.iterations < opts.iteration_cap) {
    ++res.artifacts.iterations;
    Formula w_prev = w, we_prev = we;
    LGS_TRACE_MSG("buchi outer " << res.artifacts.iterations);
    w0 = backend.qelim(Formula::conj2(build_cp(g, CpSpec::step_c(), persp, we), x));
    we0 = backend.qelim(Formula::conj2(build_cp(g, CpSpec::step_e(), persp, w0), x));
    LGS_TRACE_MSG("  prologue done w0=" << w0.node_count() << " we0=" << we0.node_count());

    Formula h = Formula::fals(), he = Formula::fals();
    res.artifacts.frontier.clear();
    res.artifacts.inner_env.clear();
    bool inner_converged = false;
    int inner_iters = 0;
    while (inner_iters < opts.iteration_cap) {
      ++inner_iters;
      Formula h_new = backend.qelim(
          Formula::conj2(Formula::disj2(build_cp(g, CpSpec::step_c(), persp, he), w0), dom));
      Formula he_new = backend.qelim(
          Formula::conj2(Formula::disj2(build_cp(g, CpSpec::step_e(), persp, h_new), we0), dom));
      LGS_TRACE_MSG("  inner " << inner_iters << " h=" << h_new.node_count()
                               << " he=" << he_new.node_count());
      if (!backend.entails(h, h_new) || !backend.entails(he, he_new))
        res.artifacts.violations.push_back(describe("Buchi inner chain shrank", inner_iters));
      Formula layer = backend.diff_regions(h_new, h);
      bool stable = backend.entails(h_new, h) && backend.entails(he_new, he);
      h = h_new;
      he = he_new;
      if (stable) {
        inner_converged = true;
        break;
      }
      res.artifacts.frontier.push_back(layer);
      res.artifacts.inner_env.push_back(he);
    }
    if (!inner_converged) {
      res.region = h;
      res.status = SolveStatus::CapExceeded;
      res.approx = Approx::Unknown;
      return res;
    }
    w = h;
    we = he;
    res.artifacts.iterates.push_back(w);
    if (!backend.entails(w, w_prev))
      res.artifacts.violations.push_back(describe("Buchi outer chain grew", res.artifacts.iterations));
    if (backend.entails(w_prev, w) && backend.entails(we_prev, we)) {
      converged = true;
      break;
    }
  }
  res.artifacts.env_region = we;  // converged H_E, the region the strategy re-enters
  res.region = w;
  if (!converged) {
    res.status = SolveStatus::CapExceeded;
    res.approx = Approx::Over;
    return res;
  }

  if (opts.want_strategy && persp == Perspective::Controller && !w.is_false()) {
    auto moves = fnd_moves(g.con, g, backend);
    if (moves) {
      const auto& c = res.artifacts.frontier;     // c[0] == W0
      const auto& hes = res.artifacts.inner_env;  // hes[j] == H_E after round j+1
      std::vector<std::vector<Formula>> parts(moves->size());
      Formula taken = Formula::fals();  // lowest-index restriction at rank one
      if (!c.empty()) {
        for (std::size_t mi = 0; mi < moves->size(); ++mi) {
          Formula u1 = backend.qelim(Formula::conj2(c[0], step_c_move(g, (*moves)[mi], we)));
          u1 = backend.diff_regions(u1, taken);
          taken = backend.qelim(Formula::disj2(taken, u1));
          parts[mi].push_back(u1);
        }
        if (!backend.entails(c[0], taken))
          res.artifacts.violations.push_back("Buchi strategy misses the recurrence core");
      }
      for (std::size_t r = 2; r <= c.size(); ++r) {
        LGS_TRACE_MSG("strategy rank " << r);
        std::vector<Formula> rank_cover;
        for (std::size_t mi = 0; mi < moves->size(); ++mi) {
          Formula cp = backend.qelim(step_c_move(g, (*moves)[mi], hes[r - 2]));
          rank_cover.push_back(cp);
          parts[mi].push_back(Formula::conj2(c[r - 1], cp));
        }
        if (!backend.entails(c[r - 1], Formula::disj(std::move(rank_cover))))
          res.artifacts.violations.push_back("Buchi strategy misses layer " + std::to_string(r - 1));
      }
      std::vector<std::pair<Formula, Formula>> us;
      for (std::size_t mi = 0; mi < moves->size(); ++mi) {
        Formula u = backend.qelim(Formula::disj(std::move(parts[mi])));
        if (u.is_false()) continue;
        us.push_back({u, backend.simplify(Formula::conj2((*moves)[mi], u))});
      }
      res.strategy = memoryless_strategy(w, us);
    }
  }
  return res;
}

SolveResult solve_simple(const Game& g, Perspective persp, SmtBackend& backend,
                         const EngineOptions& opts) {
  switch (classify(g.objective).kind) {
    case SpecClass::Kind::Safety: return solve_safety(g, persp, backend, opts);
    case SpecClass::Kind::Reachability: return solve_reachability(g, persp, backend, opts);
    case SpecClass::Kind::Buchi: return solve_buchi(g, persp, backend, opts);
    case SpecClass::Kind::CoBuchi: return solve_cobuchi(g, persp, backend, opts);
    case SpecClass::Kind::General: throw LgsError("solve_simple: objective is not simple");
  }
  throw LgsError("bad spec class");
}

}  // namespace lgs
