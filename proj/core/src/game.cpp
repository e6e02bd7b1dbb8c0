#include "lgs/game.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lgs/errors.hpp"
#include "lgs/parser.hpp"
#include "lgs/qe.hpp"

namespace lgs {

std::vector<std::string> Game::state_vars() const { return vocab.state_names(); }

Formula Game::domain(int tier) const {
  std::vector<Formula> parts;
  for (const auto& v : variables) {
    std::string name = v.name;
    for (int t = 0; t < tier; ++t) name = Vocabulary::primed(name);
    if (v.min)
      parts.push_back(Formula::cmp_expr(LinExpr::var(name), Cmp::Ge, LinExpr::cons(*v.min)));
    if (v.max)
      parts.push_back(Formula::cmp_expr(LinExpr::var(name), Cmp::Le, LinExpr::cons(*v.max)));
  }
  return Formula::conj(std::move(parts));
}

namespace {

void check_completeness(const Game& g, const Formula& moves, const char* who,
                        SmtBackend& backend) {
  std::vector<std::string> primed;
  for (const auto& v : g.state_vars()) primed.push_back(Vocabulary::primed(v));
  Formula some_move = Formula::exists(primed, Formula::conj2(g.domain(1), moves));
  SatResult stuck = backend.check(Formula::conj2(g.domain(0), Formula::neg(some_move)));
  if (stuck.sat) {
    std::ostringstream os;
    os << "game '" << g.name << "': " << who << " moves are incomplete; no successor from state";
    for (const auto& [v, val] : stuck.model)
      if (Vocabulary::tier(v) == 0) os << " " << v << "=" << rat_to_string(val);
    throw SchemaError(os.str());
  }
}

}  // namespace

Game parse_game_json(const std::string& text, const std::string& name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("game JSON: ") + e.what());
  }
  Game g;
  g.name = name;
  try {
    for (const auto& jv : j.at("variables")) {
      GameVariable v;
      v.name = jv.at("name").get<std::string>();
      std::string sort = jv.at("sort").get<std::string>();
      if (sort == "int")
        v.sort = Sort::Int;
      else if (sort == "real")
        v.sort = Sort::Real;
      else
        throw SchemaError("variable sort must be 'int' or 'real'");
      auto bound = [&](const char* key) -> std::optional<Rat> {
        if (!jv.contains(key)) return std::nullopt;
        if (jv.at(key).is_string()) {
          auto r = parse_rational(jv.at(key).get<std::string>());
          if (!r) throw SchemaError("malformed bound for variable " + v.name);
          return *r;
        }
        return Rat(jv.at(key).get<long>());
      };
      v.min = bound("min");
      v.max = bound("max");
      g.variables.push_back(v);
      g.vocab.declare(v.name, v.sort);
    }
    g.con = parse_constraint(j.at("controller").get<std::string>(), g.vocab);
    g.env = parse_constraint(j.at("environment").get<std::string>(), g.vocab);
    g.objective = parse_ltl(j.at("spec").get<std::string>(), g.vocab);
    if (j.contains("init")) g.init = parse_constraint(j.at("init").get<std::string>(), g.vocab);
    std::string player = j.value("player", "C");
    if (player == "C")
      g.player = Player::Controller;
    else if (player == "E")
      g.player = Player::Environment;
    else
      throw SchemaError("player must be 'C' or 'E'");
    if (j.contains("automaton")) g.automaton_path = j.at("automaton").get<std::string>();
    if (j.contains("automaton_neg")) g.automaton_neg_path = j.at("automaton_neg").get<std::string>();
    if (j.contains("paper_time_s")) g.paper_time_s = j.at("paper_time_s").get<double>();
    g.note = j.value("note", "");
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("game JSON: ") + e.what());
  }

  for (const auto& f : {g.con, g.env})
    for (const auto& v : f.free_vars())
      if (Vocabulary::tier(v) > 1)
        throw SchemaError("move constraint mentions double-primed variable '" + v + "'");

  SmtBackend backend(g.vocab);
  check_completeness(g, g.con, "controller", backend);
  check_completeness(g, g.env, "environment", backend);
  return g;
}

Game load_game(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open game file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  auto dot = name.find('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_game_json(ss.str(), name);
}

std::optional<std::vector<Formula>> fnd_moves(const Formula& con, const Game& game,
                                              SmtBackend& backend) {
  std::vector<Formula> moves;
  if (con.kind() == Formula::Kind::Or)
    moves = con.children();
  else
    moves = {con};

  // functionality of each disjunct: Con_i(V,V') and Con_i(V,V'') force V'=V''
  for (const auto& m : moves) {
    std::map<std::string, std::string> to_dp;
    std::vector<Formula> some_diff;
    for (const auto& v : game.state_vars()) {
      to_dp[Vocabulary::primed(v)] = Vocabulary::doubleprimed(v);
      some_diff.push_back(Formula::cmp_expr(LinExpr::var(Vocabulary::primed(v)), Cmp::Ne,
                                            LinExpr::var(Vocabulary::doubleprimed(v))));
    }
    Formula twice = Formula::conj({m, m.rename_vars(to_dp), Formula::disj(std::move(some_diff))});
    try {
      if (backend.check(twice).sat) return std::nullopt;
    } catch (const BackendError&) {
      return std::nullopt;  // cannot certify: treated as not finitely nondeterministic
    }
  }
  return moves;
}

namespace {

Game build_product(const Game& g, const SymbolicBuchiAutomaton& a, ProductPolarity polarity,
                   SmtBackend& backend, bool check_deterministic) {
  SymbolicBuchiAutomaton aut = a;
  aut.validate();
  if (aut.initial.size() != 1)
    throw SchemaError("product requires a single-initial automaton (complete it first)");
  if (check_deterministic && !is_deterministic(aut, backend))
    throw SchemaError("product requires a deterministic automaton");
  {
    // completeness: guards of every state must cover all V-states
    for (int q = 0; q < aut.num_states; ++q) {
      std::vector<Formula> guards;
      for (const auto& t : aut.transitions)
        if (t.src == q) guards.push_back(t.guard);
      Formula residual = Formula::conj2(g.domain(0), Formula::neg(Formula::disj(std::move(guards))));
      if (backend.check(residual).sat)
        throw SchemaError("product requires a complete automaton (state " + std::to_string(q) +
                          " has uncovered inputs)");
    }
  }

  std::string qvar = "q";
  while (g.vocab.contains(qvar)) qvar += "_";

  Game p;
  p.name = g.name + ".product";
  p.variables = g.variables;
  for (const auto& v : g.variables) p.vocab.declare(v.name, v.sort);
  GameVariable qv;
  qv.name = qvar;
  qv.sort = Sort::Int;
  qv.min = Rat(0);
  qv.max = Rat(aut.num_states - 1);
  p.variables.push_back(qv);
  p.vocab.declare(qvar, Sort::Int, VarRole::Automaton);
  p.player = g.player;
  p.paper_time_s = g.paper_time_s;

  Formula aut_step = transition_formula(aut, qvar);
  SmtBackend pbackend(p.vocab);

  // distribute over FND moves so the product stays finitely nondeterministic
  auto moves = fnd_moves(g.con, g, backend);
  if (moves) {
    std::vector<Formula> parts;
    for (const auto& m : *moves)
      for (const auto& t : aut.transitions) {
        Formula part = Formula::conj(
            {m,
             Formula::cmp_expr(LinExpr::var(qvar), Cmp::Eq, LinExpr::cons(Rat(t.src))), t.guard,
             Formula::cmp_expr(LinExpr::var(Vocabulary::primed(qvar)), Cmp::Eq,
                               LinExpr::cons(Rat(t.dst)))});
        if (pbackend.check(Formula::conj2(part, g.domain(0))).sat) parts.push_back(part);
      }
    p.con = Formula::disj(std::move(parts));
  } else {
    p.con = Formula::conj2(g.con, aut_step);
  }
  p.env = Formula::conj2(g.env, aut_step);

  std::vector<LtlFormula> finals;
  for (int f : aut.final_states) {
    Formula eq = Formula::cmp_expr(LinExpr::var(qvar), Cmp::Eq, LinExpr::cons(Rat(f)));
    finals.push_back(LtlFormula::atom(polarity == ProductPolarity::Accepting ? eq : Formula::neg(eq)));
  }
  if (polarity == ProductPolarity::Accepting) {
    Formula in_f = finals.empty() ? Formula::fals() : LtlFormula::lor(finals).flatten_boolean();
    p.objective = LtlFormula::globally(LtlFormula::finally(LtlFormula::atom(in_f)));
  } else {
    Formula out_f = finals.empty() ? Formula::tru() : LtlFormula::land(finals).flatten_boolean();
    p.objective = LtlFormula::finally(LtlFormula::globally(LtlFormula::atom(out_f)));
  }

  if (g.init) {
    Formula q0 = Formula::cmp_expr(LinExpr::var(qvar), Cmp::Eq, LinExpr::cons(Rat(aut.initial[0])));
    p.init = Formula::conj2(*g.init, q0);
  }
  return p;
}

}  // namespace

Game product(const Game& g, const SymbolicBuchiAutomaton& a, ProductPolarity polarity,
             SmtBackend& backend) {
  return build_product(g, a, polarity, backend, true);
}

Game product_unchecked(const Game& g, const SymbolicBuchiAutomaton& a, ProductPolarity polarity,
                       SmtBackend& backend) {
  return build_product(g, a, polarity, backend, false);
}

std::string product_state_var(const Game& product_game) {
  for (const auto& v : product_game.vocab.all())
    if (v.role == VarRole::Automaton) return v.name;
  throw LgsError("game has no automaton-state variable");
}

Formula project_initial_q(const Formula& wp, const std::string& qvar, int q0,
                          const Vocabulary& vocab) {
  std::map<std::string, LinExpr> sub{{qvar, LinExpr::cons(Rat(q0))}};
  return simplify(wp.substitute(sub), vocab);
}

}  // namespace lgs
