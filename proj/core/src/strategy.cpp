#include "lgs/strategy.hpp"

#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lgs/errors.hpp"
#include "lgs/parser.hpp"

namespace lgs {

std::string strategy_to_json(const StrategyAutomaton& s) {
  nlohmann::json j;
  j["initial"] = s.initial_env;
  j["env_states"] = nlohmann::json::array();
  for (const auto& e : s.env_states)
    j["env_states"].push_back({{"id", e.id}, {"region", e.region.to_surface()}});
  j["ctrl_states"] = nlohmann::json::array();
  for (const auto& c : s.ctrl_states)
    j["ctrl_states"].push_back({{"id", c.id}, {"move", c.move.to_surface()}});
  auto edges = [&](const std::vector<StrategyAutomaton::Edge>& es) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : es)
      arr.push_back({{"from", e.from}, {"guard", e.guard.to_surface()}, {"to", e.to}});
    return arr;
  };
  j["env_to_ctrl"] = edges(s.env_to_ctrl);
  j["ctrl_to_env"] = edges(s.ctrl_to_env);
  return j.dump(2) + "\n";
}

StrategyAutomaton strategy_from_json(const std::string& text, const Vocabulary& vocab) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("strategy JSON: ") + e.what());
  }
  StrategyAutomaton s;
  try {
    s.initial_env = j.at("initial").get<int>();
    for (const auto& je : j.at("env_states"))
      s.env_states.push_back(
          {je.at("id").get<int>(), parse_constraint(je.at("region").get<std::string>(), vocab)});
    for (const auto& jc : j.at("ctrl_states"))
      s.ctrl_states.push_back(
          {jc.at("id").get<int>(), parse_constraint(jc.at("move").get<std::string>(), vocab)});
    auto edges = [&](const char* key) {
      std::vector<StrategyAutomaton::Edge> es;
      for (const auto& je : j.at(key))
        es.push_back({je.at("from").get<int>(),
                      parse_constraint(je.at("guard").get<std::string>(), vocab),
                      je.at("to").get<int>()});
      return es;
    };
    s.env_to_ctrl = edges("env_to_ctrl");
    s.ctrl_to_env = edges("ctrl_to_env");
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("strategy JSON: ") + e.what());
  }
  return s;
}

std::string strategy_to_dot(const StrategyAutomaton& s) {
  std::ostringstream os;
  os << "digraph strategy {\n";
  os << "  init [shape=point];\n";
  for (const auto& e : s.env_states)
    os << "  e" << e.id << " [shape=ellipse, label=\"" << e.region.to_surface() << "\"];\n";
  for (const auto& c : s.ctrl_states)
    os << "  c" << c.id << " [shape=box, label=\"" << c.move.to_surface() << "\"];\n";
  os << "  init -> e" << s.initial_env << ";\n";
  for (const auto& e : s.env_to_ctrl)
    os << "  e" << e.from << " -> c" << e.to << " [label=\"" << e.guard.to_surface() << "\"];\n";
  for (const auto& e : s.ctrl_to_env)
    os << "  c" << e.from << " -> e" << e.to << " [label=\"" << e.guard.to_surface() << "\"];\n";
  os << "}\n";
  return os.str();
}

StrategyAutomaton strategy_from_dot(const std::string& text, const Vocabulary& vocab) {
  StrategyAutomaton s;
  std::istringstream in(text);
  std::string line;
  auto fail = [&](const std::string& why) { throw SchemaError("strategy DOT: " + why); };
  while (std::getline(in, line)) {
    auto trim = [](std::string& t) {
      t.erase(0, t.find_first_not_of(" \t"));
      while (!t.empty() && (t.back() == '\r' || t.back() == ' ')) t.pop_back();
    };
    trim(line);
    if (line.empty() || line[0] == '}' || line.rfind("digraph", 0) == 0) continue;
    if (line.rfind("init [", 0) == 0) continue;
    auto label_of = [&](const std::string& l) {
      auto a = l.find("label=\"");
      if (a == std::string::npos) fail("missing label: " + l);
      a += 7;
      auto b = l.find('"', a);
      if (b == std::string::npos) fail("unterminated label: " + l);
      return l.substr(a, b - a);
    };
    auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      // node line: e<id>/c<id> [shape=..., label="..."])
      char kind = line[0];
      int id = std::stoi(line.substr(1));
      Formula f = parse_constraint(label_of(line), vocab);
      if (kind == 'e')
        s.env_states.push_back({id, f});
      else if (kind == 'c')
        s.ctrl_states.push_back({id, f});
      else
        fail("unknown node: " + line);
      continue;
    }
    std::string lhs = line.substr(0, arrow);
    std::string rhs = line.substr(arrow + 2);
    auto trimmed = [&](std::string t) {
      trim(t);
      return t;
    };
    lhs = trimmed(lhs);
    rhs = trimmed(rhs);
    if (lhs == "init") {
      s.initial_env = std::stoi(rhs.substr(1, rhs.find_first_of(" ;[") - 1));
      continue;
    }
    int from = std::stoi(lhs.substr(1));
    int to = std::stoi(rhs.substr(1, rhs.find_first_of(" ;[") - 1));
    Formula guard = parse_constraint(label_of(line), vocab);
    if (lhs[0] == 'e')
      s.env_to_ctrl.push_back({from, guard, to});
    else
      s.ctrl_to_env.push_back({from, guard, to});
  }
  return s;
}

StrategyAutomaton lift_strategy(const StrategyAutomaton& product_strategy,
                                const SymbolicBuchiAutomaton& a, const std::string& qvar,
                                SmtBackend& backend) {
  if (!product_strategy.memoryless())
    throw LgsError("lift_strategy expects a memoryless product strategy");
  const std::string qvar_p = Vocabulary::primed(qvar);

  StrategyAutomaton out;
  // environment states: one per automaton state
  for (int p = 0; p < a.num_states; ++p) {
    std::map<std::string, LinExpr> sub{{qvar, LinExpr::cons(Rat(p))}};
    out.env_states.push_back(
        {p, backend.simplify(product_strategy.env_states[0].region.substitute(sub))});
  }
  out.initial_env = a.initial.empty() ? 0 : a.initial[0];

  // controller states: (product controller state, automaton successor)
  std::map<std::pair<int, int>, int> ctrl_ids;
  auto ctrl_id = [&](int j, int dst, const Formula& move) {
    auto it = ctrl_ids.find({j, dst});
    if (it != ctrl_ids.end()) return it->second;
    int id = static_cast<int>(out.ctrl_states.size());
    ctrl_ids[{j, dst}] = id;
    out.ctrl_states.push_back({id, move});
    return id;
  };

  for (const auto& edge : product_strategy.env_to_ctrl) {
    const auto& cstate = product_strategy.ctrl_states[static_cast<std::size_t>(edge.to)];
    for (const auto& t : a.transitions) {
      // memory p reading the current state: guard restricted to q = t.src
      std::map<std::string, LinExpr> sub{{qvar, LinExpr::cons(Rat(t.src))}};
      Formula guard = backend.simplify(
          Formula::conj2(edge.guard.substitute(sub), t.guard));
      if (guard.is_false() || !backend.check(guard).sat) continue;
      std::map<std::string, LinExpr> move_sub{{qvar, LinExpr::cons(Rat(t.src))},
                                              {qvar_p, LinExpr::cons(Rat(t.dst))}};
      Formula move = backend.simplify(cstate.move.substitute(move_sub));
      if (move.is_false()) continue;
      int cid = ctrl_id(edge.to, t.dst, move);
      out.env_to_ctrl.push_back({t.src, guard, cid});
      // after the controller's move the automaton reads the reached state
      for (const auto& t2 : a.transitions) {
        if (t2.src != t.dst) continue;
        out.ctrl_to_env.push_back({cid, t2.guard, t2.dst});
      }
    }
  }
  // dedupe ctrl_to_env edges produced per incoming edge
  std::set<std::string> seen;
  std::vector<StrategyAutomaton::Edge> ce;
  for (const auto& e : out.ctrl_to_env) {
    std::ostringstream key;
    key << e.from << "|" << e.guard.repr() << "|" << e.to;
    if (seen.insert(key.str()).second) ce.push_back(e);
  }
  out.ctrl_to_env = std::move(ce);
  return out;
}

}  // namespace lgs
