#include "lgs/automaton.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lgs/errors.hpp"
#include "lgs/parser.hpp"

namespace lgs {

bool SymbolicBuchiAutomaton::is_final(int q) const {
  return std::find(final_states.begin(), final_states.end(), q) != final_states.end();
}

std::vector<const AutTransition*> SymbolicBuchiAutomaton::from(int q) const {
  std::vector<const AutTransition*> out;
  for (const auto& t : transitions)
    if (t.src == q) out.push_back(&t);
  return out;
}

void SymbolicBuchiAutomaton::validate() const {
  if (num_states <= 0) throw SchemaError("automaton must have at least one state");
  if (initial.empty()) throw SchemaError("automaton must have an initial state");
  auto in_range = [&](int q) { return q >= 0 && q < num_states; };
  for (int q : initial)
    if (!in_range(q)) throw SchemaError("initial state id out of range");
  for (int q : final_states)
    if (!in_range(q)) throw SchemaError("final state id out of range");
  for (const auto& t : transitions) {
    if (!in_range(t.src) || !in_range(t.dst)) throw SchemaError("transition state id out of range");
    if (!t.guard.is_quantifier_free()) throw SchemaError("transition guard must be quantifier-free");
    for (const auto& v : t.guard.free_vars())
      if (Vocabulary::tier(v) != 0)
        throw SchemaError("transition guard mentions primed variable '" + v + "'");
  }
}

SymbolicBuchiAutomaton complete(const SymbolicBuchiAutomaton& a, SmtBackend& backend) {
  SymbolicBuchiAutomaton out = a;
  int sink = -1;
  for (int q = 0; q < a.num_states; ++q) {
    std::vector<Formula> guards;
    for (const auto& t : a.transitions)
      if (t.src == q) guards.push_back(t.guard);
    Formula residual = backend.simplify(Formula::neg(Formula::disj(std::move(guards))));
    if (residual.is_false()) continue;
    if (!backend.check(residual).sat) continue;
    if (sink < 0) {
      sink = out.num_states++;
      out.transitions.push_back({sink, Formula::tru(), sink});
    }
    out.transitions.push_back({q, residual, sink});
  }
  return out;
}

bool is_deterministic(const SymbolicBuchiAutomaton& a, SmtBackend& backend) {
  if (a.initial.size() != 1) return false;
  for (int q = 0; q < a.num_states; ++q) {
    auto outs = a.from(q);
    for (std::size_t i = 0; i < outs.size(); ++i)
      for (std::size_t j = i + 1; j < outs.size(); ++j) {
        if (outs[i]->dst == outs[j]->dst) continue;
        try {
          if (backend.check(Formula::conj2(outs[i]->guard, outs[j]->guard)).sat) return false;
        } catch (const BackendError& e) {
          throw BackendError(std::string("cannot certify deterministic: ") + e.what());
        }
      }
  }
  return true;
}

Formula transition_formula(const SymbolicBuchiAutomaton& a, const std::string& state_var) {
  std::vector<Formula> parts;
  const std::string primed = Vocabulary::primed(state_var);
  for (const auto& t : a.transitions) {
    Formula src = Formula::cmp_expr(LinExpr::var(state_var), Cmp::Eq, LinExpr::cons(Rat(t.src)));
    Formula dst = Formula::cmp_expr(LinExpr::var(primed), Cmp::Eq, LinExpr::cons(Rat(t.dst)));
    parts.push_back(Formula::conj({src, t.guard, dst}));
  }
  return Formula::disj(std::move(parts));
}

SymbolicBuchiAutomaton canonicalize(const SymbolicBuchiAutomaton& a) {
  std::vector<int> order(a.num_states, -1);
  std::deque<int> queue;
  int next = 0;
  std::vector<int> init_sorted = a.initial;
  std::sort(init_sorted.begin(), init_sorted.end());
  for (int q : init_sorted) {
    if (order[q] < 0) {
      order[q] = next++;
      queue.push_back(q);
    }
  }
  // successor exploration in transition-list order
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (const auto& t : a.transitions) {
      if (t.src != q || order[t.dst] >= 0) continue;
      order[t.dst] = next++;
      queue.push_back(t.dst);
    }
  }
  SymbolicBuchiAutomaton out;
  out.num_states = next;
  out.view = a.view;
  for (int q : a.initial)
    if (order[q] >= 0) out.initial.push_back(order[q]);
  std::sort(out.initial.begin(), out.initial.end());
  for (int q : a.final_states)
    if (order[q] >= 0) out.final_states.push_back(order[q]);
  std::sort(out.final_states.begin(), out.final_states.end());
  for (const auto& t : a.transitions)
    if (order[t.src] >= 0 && order[t.dst] >= 0)
      out.transitions.push_back({order[t.src], t.guard, order[t.dst]});
  std::sort(out.transitions.begin(), out.transitions.end(),
            [](const AutTransition& x, const AutTransition& y) {
              return std::tie(x.src, x.dst) < std::tie(y.src, y.dst);
            });
  return out;
}

namespace {

AcceptanceView view_from_string(const std::string& s) {
  if (s == "buchi") return AcceptanceView::Buchi;
  if (s == "cobuchi") return AcceptanceView::CoBuchi;
  if (s == "ucw") return AcceptanceView::UniversalCoBuchi;
  if (s == "safety") return AcceptanceView::Safety;
  throw SchemaError("unknown acceptance view '" + s + "'");
}

std::string view_to_string(AcceptanceView v) {
  switch (v) {
    case AcceptanceView::Buchi: return "buchi";
    case AcceptanceView::CoBuchi: return "cobuchi";
    case AcceptanceView::UniversalCoBuchi: return "ucw";
    case AcceptanceView::Safety: return "safety";
  }
  throw LgsError("bad view");
}

}  // namespace

SymbolicBuchiAutomaton parse_automaton_json(const std::string& text, const Vocabulary& vocab) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("automaton JSON: ") + e.what());
  }
  SymbolicBuchiAutomaton a;
  try {
    a.num_states = j.at("states").get<int>();
    a.initial = j.at("initial").get<std::vector<int>>();
    a.final_states = j.at("final").get<std::vector<int>>();
    a.view = view_from_string(j.value("view", "buchi"));
    for (const auto& t : j.at("transitions")) {
      AutTransition tr;
      tr.src = t.at("src").get<int>();
      tr.dst = t.at("dst").get<int>();
      tr.guard = parse_constraint(t.at("guard").get<std::string>(), vocab);
      a.transitions.push_back(std::move(tr));
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("automaton JSON: ") + e.what());
  }
  a.validate();
  return a;
}

SymbolicBuchiAutomaton load_automaton(const std::string& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open automaton file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_automaton_json(ss.str(), vocab);
}

std::string automaton_to_json(const SymbolicBuchiAutomaton& a) {
  nlohmann::json j;
  j["states"] = a.num_states;
  j["initial"] = a.initial;
  j["final"] = a.final_states;
  j["view"] = view_to_string(a.view);
  j["transitions"] = nlohmann::json::array();
  for (const auto& t : a.transitions) {
    j["transitions"].push_back(
        {{"src", t.src}, {"guard", t.guard.to_surface()}, {"dst", t.dst}});
  }
  return j.dump(2) + "\n";
}

bool lasso_accepted(const SymbolicBuchiAutomaton& a,
                    const std::vector<std::map<std::string, Rat>>& prefix,
                    const std::vector<std::map<std::string, Rat>>& cycle) {
  if (cycle.empty()) throw LgsError("lasso cycle must be nonempty");
  const std::size_t n = prefix.size() + cycle.size();
  auto state_at = [&](std::size_t i) -> const std::map<std::string, Rat>& {
    return i < prefix.size() ? prefix[i] : cycle[i - prefix.size()];
  };
  auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : prefix.size(); };

  // product nodes (position, automaton state); find a reachable final node
  // that lies on a cycle of the product
  auto node = [&](std::size_t i, int q) { return i * static_cast<std::size_t>(a.num_states) + q; };
  std::vector<std::vector<std::size_t>> adj(n * a.num_states);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& t : a.transitions)
      if (eval_formula(t.guard, state_at(i))) adj[node(i, t.src)].push_back(node(succ(i), t.dst));

  std::vector<bool> reach(n * a.num_states, false);
  std::deque<std::size_t> queue;
  for (int q0 : a.initial) {
    reach[node(0, q0)] = true;
    queue.push_back(node(0, q0));
  }
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : adj[u])
      if (!reach[v]) {
        reach[v] = true;
        queue.push_back(v);
      }
  }
  // final product node on a nonempty cycle through itself
  for (std::size_t i = 0; i < n; ++i)
    for (int q : a.final_states) {
      std::size_t f = node(i, q);
      if (!reach[f]) continue;
      std::vector<bool> seen(n * a.num_states, false);
      std::deque<std::size_t> bfs(adj[f].begin(), adj[f].end());
      for (std::size_t v : adj[f]) seen[v] = true;
      bool loops = false;
      while (!bfs.empty() && !loops) {
        std::size_t u = bfs.front();
        bfs.pop_front();
        if (u == f) loops = true;
        for (std::size_t v : adj[u])
          if (!seen[v]) {
            seen[v] = true;
            bfs.push_back(v);
          }
      }
      if (loops || std::find(adj[f].begin(), adj[f].end(), f) != adj[f].end()) return true;
    }
  return false;
}

}  // namespace lgs
