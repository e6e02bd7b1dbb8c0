#include "lgs/oracle.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "lgs/errors.hpp"
#include "lgs/otf.hpp"

namespace lgs {

std::size_t GridBox::size() const {
  std::size_t n = 1;
  for (const auto& [v, r] : ranges) {
    if (r.second < r.first) return 0;
    n *= static_cast<std::size_t>(r.second - r.first + 1);
    if (n > state_limit) throw LgsError("grid box exceeds the state limit");
  }
  return n;
}

std::vector<Valuation> GridBox::states() const {
  std::size_t n = size();
  std::vector<Valuation> out;
  out.reserve(n);
  std::vector<std::pair<std::string, std::pair<long, long>>> dims(ranges.begin(), ranges.end());
  Valuation cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == dims.size()) {
      out.push_back(cur);
      return;
    }
    for (long v = dims[i].second.first; v <= dims[i].second.second; ++v) {
      cur[dims[i].first] = Rat(v);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

bool GridBox::contains(const Valuation& s) const {
  for (const auto& [v, r] : ranges) {
    auto it = s.find(v);
    if (it == s.end()) return false;
    if (!is_integer(it->second)) return false;
    Rat lo(r.first), hi(r.second);
    if (it->second < lo || it->second > hi) return false;
  }
  return true;
}

namespace {

struct ExplicitGame {
  std::vector<Valuation> states;
  std::map<std::string, std::size_t> index;  // key: serialized state
  std::vector<std::vector<std::size_t>> con_succ, env_succ;

  static std::string key(const Valuation& s) {
    std::ostringstream os;
    for (const auto& [v, val] : s) os << v << "=" << rat_to_string(val) << ";";
    return os.str();
  }
};

// Enumerates successors of s under the move constraint within the box by
// per-variable candidate search on the substituted formula.
std::vector<std::size_t> successors(const Valuation& s, const Formula& move, const GridBox& box,
                                    const ExplicitGame& eg, const std::vector<std::string>& vars) {
  std::map<std::string, LinExpr> sub;
  for (const auto& [v, val] : s) sub[v] = LinExpr::cons(val);
  Formula stepped = move.substitute(sub);  // over primed vars
  std::vector<std::size_t> out;
  Valuation target;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == vars.size()) {
      Valuation primed;
      for (const auto& [v, val] : target) primed[Vocabulary::primed(v)] = val;
      if (eval_formula(stepped, primed)) {
        auto it = eg.index.find(ExplicitGame::key(target));
        if (it != eg.index.end()) out.push_back(it->second);
      }
      return;
    }
    auto r = box.ranges.at(vars[i]);
    for (long v = r.first; v <= r.second; ++v) {
      target[vars[i]] = Rat(v);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

ExplicitGame build_explicit(const Game& g, const GridBox& box) {
  for (const auto& v : g.variables) {
    if (v.sort != Sort::Int) throw LgsError("region oracle is restricted to Int-sorted games");
    if (!box.ranges.count(v.name)) throw LgsError("box missing variable '" + v.name + "'");
  }
  ExplicitGame eg;
  eg.states = box.states();
  for (std::size_t i = 0; i < eg.states.size(); ++i) eg.index[ExplicitGame::key(eg.states[i])] = i;
  std::vector<std::string> vars = g.state_vars();
  eg.con_succ.resize(eg.states.size());
  eg.env_succ.resize(eg.states.size());
  for (std::size_t i = 0; i < eg.states.size(); ++i) {
    eg.con_succ[i] = successors(eg.states[i], g.con, box, eg, vars);
    eg.env_succ[i] = successors(eg.states[i], g.env, box, eg, vars);
    if (eg.con_succ[i].empty() || eg.env_succ[i].empty())
      throw LgsError("box clipping removed every move from a state (clipped-incompleteness)");
  }
  return eg;
}

using Bits = std::vector<bool>;

std::size_t count(const Bits& b) {
  std::size_t n = 0;
  for (bool x : b) n += x;
  return n;
}

// one protagonist round: from s, a protagonist move exists (or all opponent
// replies stay, in the Environment perspective) such that every reply lands
// in `target`, with the intermediate state constrained by `mid` if given
Bits cpre(const ExplicitGame& eg, Perspective persp, const Bits& target, const Bits* mid) {
  std::size_t n = eg.states.size();
  Bits out(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (persp == Perspective::Controller) {
      bool ok = false;
      for (std::size_t t : eg.con_succ[i]) {
        if (mid && !(*mid)[t]) continue;
        bool all = true;
        for (std::size_t u : eg.env_succ[t])
          if (!target[u]) {
            all = false;
            break;
          }
        if (all) {
          ok = true;
          break;
        }
      }
      out[i] = ok;
    } else {
      bool all_moves = true;
      for (std::size_t t : eg.con_succ[i]) {
        if (mid && !(*mid)[t]) {
          all_moves = false;
          break;
        }
        bool some = false;
        for (std::size_t u : eg.env_succ[t])
          if (target[u]) {
            some = true;
            break;
          }
        if (!some) {
          all_moves = false;
          break;
        }
      }
      out[i] = all_moves;
    }
  }
  return out;
}

// reach-style round: protagonist succeeds already at the intermediate state
Bits cpre_reach(const ExplicitGame& eg, Perspective persp, const Bits& target, const Bits& hit) {
  std::size_t n = eg.states.size();
  Bits out(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (persp == Perspective::Controller) {
      bool ok = false;
      for (std::size_t t : eg.con_succ[i]) {
        if (hit[t]) {
          ok = true;
          break;
        }
        bool all = true;
        for (std::size_t u : eg.env_succ[t])
          if (!target[u]) {
            all = false;
            break;
          }
        if (all) {
          ok = true;
          break;
        }
      }
      out[i] = ok;
    } else {
      bool all_moves = true;
      for (std::size_t t : eg.con_succ[i]) {
        if (hit[t]) continue;
        bool some = false;
        for (std::size_t u : eg.env_succ[t])
          if (target[u]) {
            some = true;
            break;
          }
        if (!some) {
          all_moves = false;
          break;
        }
      }
      out[i] = all_moves;
    }
  }
  return out;
}

// single protagonist / opponent half-steps (Buchi nested fixpoint)
Bits step_c(const ExplicitGame& eg, Perspective persp, const Bits& target) {
  std::size_t n = eg.states.size();
  Bits out(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (persp == Perspective::Controller) {
      for (std::size_t t : eg.con_succ[i])
        if (target[t]) {
          out[i] = true;
          break;
        }
    } else {
      bool all = true;
      for (std::size_t t : eg.con_succ[i])
        if (!target[t]) {
          all = false;
          break;
        }
      out[i] = all;
    }
  }
  return out;
}

Bits step_e(const ExplicitGame& eg, Perspective persp, const Bits& target) {
  std::size_t n = eg.states.size();
  Bits out(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (persp == Perspective::Controller) {
      bool all = true;
      for (std::size_t t : eg.env_succ[i])
        if (!target[t]) {
          all = false;
          break;
        }
      out[i] = all;
    } else {
      for (std::size_t t : eg.env_succ[i])
        if (target[t]) {
          out[i] = true;
          break;
        }
    }
  }
  return out;
}

Bits bits_and(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}
Bits bits_or(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
  return out;
}

Bits safety_fix(const ExplicitGame& eg, Perspective persp, const Bits& x) {
  Bits w = x;
  for (;;) {
    Bits next = bits_and(x, cpre(eg, persp, w, &x));
    if (next == w) return w;
    w = next;
  }
}

Bits reach_fix(const ExplicitGame& eg, Perspective persp, const Bits& x) {
  Bits w = x;
  for (;;) {
    Bits next = bits_or(x, cpre_reach(eg, persp, w, x));
    if (next == w) return w;
    w = next;
  }
}

Bits attractor_plain(const ExplicitGame& eg, Perspective persp, const Bits& target) {
  Bits w = target;
  for (;;) {
    Bits next = bits_or(w, cpre(eg, persp, w, nullptr));
    if (next == w) return w;
    w = next;
  }
}

Bits buchi_fix(const ExplicitGame& eg, Perspective persp, const Bits& x) {
  std::size_t n = eg.states.size();
  Bits w(n, true), we(n, true);
  for (;;) {
    Bits w0 = bits_and(step_c(eg, persp, we), x);
    Bits we0 = bits_and(step_e(eg, persp, w), x);
    Bits h(n, false), he(n, false);
    for (;;) {
      Bits hn = bits_or(step_c(eg, persp, he), w0);
      Bits hen = bits_or(step_e(eg, persp, hn), we0);
      if (hn == h && hen == he) break;
      h = hn;
      he = hen;
    }
    if (h == w && he == we) return w;
    w = h;
    we = he;
  }
}

Bits cobuchi_fix(const ExplicitGame& eg, Perspective persp, const Bits& x) {
  Bits core = safety_fix(eg, persp, x);
  return attractor_plain(eg, persp, core);
}

}  // namespace

std::vector<Valuation> explicit_solve(const Game& g, const GridBox& box, ObjectiveKind kind,
                                      const Formula& predicate, Perspective persp) {
  ExplicitGame eg = build_explicit(g, box);
  Bits x(eg.states.size());
  for (std::size_t i = 0; i < eg.states.size(); ++i) x[i] = eval_formula(predicate, eg.states[i]);
  Bits w;
  switch (kind) {
    case ObjectiveKind::Safety: w = safety_fix(eg, persp, x); break;
    case ObjectiveKind::Reachability: w = reach_fix(eg, persp, x); break;
    case ObjectiveKind::Buchi: w = buchi_fix(eg, persp, x); break;
    case ObjectiveKind::CoBuchi: w = cobuchi_fix(eg, persp, x); break;
  }
  std::vector<Valuation> out;
  for (std::size_t i = 0; i < eg.states.size(); ++i)
    if (w[i]) out.push_back(eg.states[i]);
  (void)count;
  return out;
}

std::vector<Valuation> explicit_solve_auto(const Game& g, const GridBox& box, Perspective persp) {
  SpecClass cls = classify(g.objective);
  ObjectiveKind kind;
  switch (cls.kind) {
    case SpecClass::Kind::Safety: kind = ObjectiveKind::Safety; break;
    case SpecClass::Kind::Reachability: kind = ObjectiveKind::Reachability; break;
    case SpecClass::Kind::Buchi: kind = ObjectiveKind::Buchi; break;
    case SpecClass::Kind::CoBuchi: kind = ObjectiveKind::CoBuchi; break;
    default: throw LgsError("explicit_solve_auto: objective is not simple");
  }
  return explicit_solve(g, box, kind, cls.predicate, persp);
}

std::vector<Valuation> explicit_k_region(const Game& g, const GridBox& box,
                                         const SymbolicBuchiAutomaton& a, int k,
                                         Perspective persp) {
  ExplicitGame eg = build_explicit(g, box);
  // product nodes: (state index, counting vector); enumerate reachable
  // vectors lazily through a fixpoint over the full product
  std::map<std::string, std::size_t> vec_index;
  std::vector<CountingVector> vectors;
  auto vec_id = [&](const CountingVector& c) {
    std::ostringstream os;
    for (long v : c) os << v << ",";
    auto it = vec_index.find(os.str());
    if (it != vec_index.end()) return it->second;
    std::size_t id = vectors.size();
    vec_index[os.str()] = id;
    vectors.push_back(c);
    return id;
  };
  // all vectors in [-1, k+1]^Q would be huge; collect those reachable from
  // any (state, c0) plus all one-step successors encountered in the fixpoint
  std::size_t n = eg.states.size();
  std::vector<std::map<std::size_t, std::size_t>> succ_vec(n);  // per state: vec -> vec'
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<std::pair<std::size_t, std::size_t>> work;
  std::size_t c0 = vec_id(initial_vector(a));
  for (std::size_t i = 0; i < n; ++i) work.push_back({i, c0});
  while (!work.empty()) {
    auto [si, vi] = work.back();
    work.pop_back();
    if (!seen.insert({si, vi}).second) continue;
    CountingVector next = succ_k(vectors[vi], eg.states[si], a, k);
    std::size_t ni = vec_id(next);
    succ_vec[si][vi] = ni;
    for (std::size_t t : eg.con_succ[si]) work.push_back({t, ni});
    for (std::size_t t : eg.env_succ[si]) work.push_back({t, ni});
    if (seen.size() > box.state_limit) throw LgsError("k-safety product exceeds the state limit");
  }
  auto safe = [&](std::size_t vi) {
    for (long v : vectors[vi])
      if (v > k) return false;
    return true;
  };
  auto vec_succ = [&](std::size_t si, std::size_t vi) {
    auto it = succ_vec[si].find(vi);
    if (it != succ_vec[si].end()) return it->second;
    std::size_t ni = vec_id(succ_k(vectors[vi], eg.states[si], a, k));
    succ_vec[si][vi] = ni;
    return ni;
  };

  // GFP: X = safe pairs from which the protagonist keeps the play safe
  std::set<std::pair<std::size_t, std::size_t>> x;
  for (const auto& p : seen)
    if (safe(p.second)) x.insert(p);
  for (;;) {
    std::set<std::pair<std::size_t, std::size_t>> next;
    for (const auto& [si, vi] : x) {
      std::size_t mid_vec = vec_succ(si, vi);
      bool win;
      if (persp == Perspective::Controller) {
        win = false;
        for (std::size_t t : eg.con_succ[si]) {
          if (!safe(mid_vec)) break;
          std::size_t end_vec = vec_succ(t, mid_vec);
          bool all = true;
          for (std::size_t u : eg.env_succ[t])
            if (!x.count({u, end_vec})) {
              all = false;
              break;
            }
          if (all) {
            win = true;
            break;
          }
        }
      } else {
        win = true;
        for (std::size_t t : eg.con_succ[si]) {
          if (!safe(mid_vec)) {
            win = false;
            break;
          }
          std::size_t end_vec = vec_succ(t, mid_vec);
          bool some = false;
          for (std::size_t u : eg.env_succ[t])
            if (x.count({u, end_vec})) {
              some = true;
              break;
            }
          if (!some) {
            win = false;
            break;
          }
        }
      }
      if (win) next.insert({si, vi});
    }
    if (next == x) break;
    x = std::move(next);
  }
  std::vector<Valuation> out;
  for (std::size_t i = 0; i < n; ++i)
    if (x.count({i, c0})) out.push_back(eg.states[i]);
  return out;
}

std::string region_to_csv(const std::vector<Valuation>& states,
                          const std::vector<std::string>& vars) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? "," : "") << vars[i];
  os << "\n";
  std::vector<std::string> rows;
  for (const auto& s : states) {
    std::ostringstream row;
    for (std::size_t i = 0; i < vars.size(); ++i)
      row << (i ? "," : "") << rat_to_string(s.at(vars[i]));
    rows.push_back(row.str());
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& r : rows) os << r << "\n";
  return os.str();
}

namespace {

// up to eight distinct models of `move` from state s, for sampling
std::vector<Valuation> sample_successors(const Game& g, SmtBackend& backend, const Formula& move,
                                         const Valuation& s) {
  std::map<std::string, LinExpr> sub;
  for (const auto& [v, val] : s) sub[v] = LinExpr::cons(val);
  Formula stepped = Formula::conj2(move.substitute(sub), g.domain(1));
  std::vector<Valuation> out;
  Formula block = Formula::tru();
  for (int i = 0; i < 8; ++i) {
    SatResult r = backend.check(Formula::conj2(stepped, block));
    if (!r.sat) break;
    Valuation nxt;
    std::vector<Formula> differ;
    for (const auto& v : g.state_vars()) {
      Rat val = r.model.count(Vocabulary::primed(v)) ? r.model[Vocabulary::primed(v)] : Rat(0);
      nxt[v] = val;
      differ.push_back(
          Formula::cmp_expr(LinExpr::var(Vocabulary::primed(v)), Cmp::Ne, LinExpr::cons(val)));
    }
    out.push_back(nxt);
    block = Formula::conj2(block, Formula::disj(std::move(differ)));
  }
  return out;
}

}  // namespace

PlayResult simulate(const Game& g, const StrategyAutomaton& strategy, const Valuation& start,
                    int steps, std::uint64_t seed,
                    const std::optional<Formula>& monitor_predicate) {
  SmtBackend backend(g.vocab);
  std::mt19937_64 rng(seed);
  PlayResult res;
  Valuation s = start;
  int memory = strategy.initial_env;
  auto monitor = [&](const Valuation& state) {
    if (!monitor_predicate) return;
    if (eval_formula(*monitor_predicate, state))
      res.target_hit = true;
    else
      res.safety_violated = true;
  };
  res.states.push_back(s);
  monitor(s);
  for (int step = 0; step < steps; ++step) {
    // controller half-step through the strategy automaton
    const StrategyAutomaton::Edge* chosen = nullptr;
    for (const auto& e : strategy.env_to_ctrl) {
      if (e.from != memory) continue;
      if (eval_formula(e.guard, s)) {
        chosen = &e;
        break;
      }
    }
    if (!chosen) {
      res.strategy_hole = true;
      return res;
    }
    const auto& ctrl = strategy.ctrl_states[static_cast<std::size_t>(chosen->to)];
    auto moves = sample_successors(g, backend, ctrl.move, s);
    if (moves.empty()) {
      res.strategy_hole = true;
      return res;
    }
    s = moves[rng() % moves.size()];
    res.states.push_back(s);
    monitor(s);
    // memory update reading the reached state
    int next_memory = -1;
    for (const auto& e : strategy.ctrl_to_env) {
      if (e.from != chosen->to) continue;
      if (eval_formula(e.guard, s)) {
        next_memory = e.to;
        break;
      }
    }
    if (next_memory < 0) {
      res.strategy_hole = true;
      return res;
    }
    memory = next_memory;
    // environment half-step
    auto replies = sample_successors(g, backend, g.env, s);
    if (replies.empty()) throw LgsError("environment has no move during simulation");
    s = replies[rng() % replies.size()];
    res.states.push_back(s);
    monitor(s);
  }
  return res;
}

}  // namespace lgs
