#include <sstream>

#include "doctest.h"
#include "lgs/engines.hpp"
#include "lgs/oracle.hpp"
#include "lgs/parser.hpp"

using namespace lgs;

namespace {

const std::string corpus = LGS_CORPUS_DIR;

Game small_game(const std::string& con, const std::string& env, const std::string& spec,
                std::optional<std::pair<long, long>> xdom = std::nullopt) {
  Game g;
  g.name = "unit";
  GameVariable v;
  v.name = "x";
  v.sort = Sort::Int;
  if (xdom) {
    v.min = Rat(xdom->first);
    v.max = Rat(xdom->second);
  }
  g.variables.push_back(v);
  g.vocab.declare("x", Sort::Int);
  g.con = parse_constraint(con, g.vocab);
  g.env = parse_constraint(env, g.vocab);
  g.objective = parse_ltl(spec, g.vocab);
  return g;
}

// symbolic region restricted to the box must equal the explicit one
void check_against_oracle(const Game& g, const Formula& region, const GridBox& box,
                          Perspective persp, SmtBackend& b) {
  auto oracle = explicit_solve_auto(g, box, persp);
  std::set<std::string> in_oracle;
  for (const auto& s : oracle) {
    std::ostringstream os;
    for (const auto& [v, val] : s) os << v << "=" << rat_to_string(val) << ";";
    in_oracle.insert(os.str());
  }
  for (const auto& s : box.states()) {
    std::ostringstream os;
    for (const auto& [v, val] : s) os << v << "=" << rat_to_string(val) << ";";
    bool symbolic = eval_formula(region, s);
    bool explicit_win = in_oracle.count(os.str()) != 0;
    REQUIRE_MESSAGE(symbolic == explicit_win, g.name, ": disagree at ", os.str());
  }
}

}  // namespace

TEST_CASE("controllable predecessor shapes") {
  Game g = small_game("x' == x || x' == x + 1 || x' == x - 1", "x' == x", "G (x >= 0)");
  SmtBackend b(g.vocab);
  // one-step controller predecessor of x == 2 through the elevator moves
  Formula cp = b.qelim(build_cp(g, CpSpec::step_c(), Perspective::Controller,
                                parse_constraint("x == 2", g.vocab)));
  CHECK(b.equivalent(cp, parse_constraint("x == 1 || x == 2 || x == 3", g.vocab)));
  // plain through a functional pair: Con x'=x+1, Env x'=x, Y = x >= 2
  Game h = small_game("x' == x + 1", "x' == x", "G (x >= 0)");
  SmtBackend hb(h.vocab);
  Formula plain = hb.qelim(build_cp(h, CpSpec::plain(), Perspective::Controller,
                                    parse_constraint("x >= 2", h.vocab)));
  CHECK(hb.equivalent(plain, parse_constraint("x >= 1", h.vocab)));
  // safe with an unsatisfiable filter is empty
  Formula safe = hb.qelim(build_cp(h, CpSpec::safe(Formula::fals()), Perspective::Controller,
                                   parse_constraint("x >= 0", h.vocab)));
  CHECK(safe.is_false());
}

TEST_CASE("safety solver matches the oracle on grid games") {
  for (const char* name : {"box", "box_limited", "diagonal", "solitary_box", "square5"}) {
    Game g = load_game(corpus + "/" + name + ".game.json");
    SmtBackend b(g.vocab);
    SolveResult r = solve_safety(g, Perspective::Controller, b);
    REQUIRE(r.status == SolveStatus::Converged);
    CHECK(r.artifacts.violations.empty());
    GridBox box;
    for (const auto& v : g.variables) box.ranges[v.name] = {-2, 7};
    check_against_oracle(g, r.region, box, Perspective::Controller, b);
    REQUIRE(r.strategy.has_value());
  }
}

TEST_CASE("safety strategy is maximally permissive on the box game") {
  Game g = load_game(corpus + "/box.game.json");
  SmtBackend b(g.vocab);
  SolveResult r = solve_safety(g, Perspective::Controller, b);
  REQUIRE(r.strategy);
  // at every winning grid state, each offered move keeps all replies winning
  GridBox box;
  box.ranges["x"] = {0, 3};
  box.ranges["y"] = {0, 2};
  auto moves = fnd_moves(g.con, g, b);
  REQUIRE(moves);
  for (const auto& s : box.states()) {
    if (!eval_formula(r.region, s)) continue;
    int offered = 0;
    for (const auto& edge : r.strategy->env_to_ctrl) {
      if (!eval_formula(edge.guard, s)) continue;
      ++offered;
      const auto& move = r.strategy->ctrl_states[edge.to].move;
      // the successor under this deterministic move stays winning after any reply
      for (long nx = -1; nx <= 4; ++nx) {
        Valuation t{{"x", Rat(nx)}, {"y", s.at("y")}};
        Valuation both;
        for (const auto& [k, val] : s) both[k] = val;
        for (const auto& [k, val] : t) both[Vocabulary::primed(k)] = val;
        if (!eval_formula(move, both)) continue;
        for (long ex = nx - 1; ex <= nx + 1; ++ex) {
          Valuation reply{{"x", Rat(ex)}, {"y", t.at("y")}};
          Valuation pair;
          for (const auto& [k, val] : t) pair[k] = val;
          for (const auto& [k, val] : reply) pair[Vocabulary::primed(k)] = val;
          if (!eval_formula(g.env, pair)) continue;
          CHECK(eval_formula(r.region, reply));
        }
      }
    }
    CHECK(offered >= 1);
  }
}

TEST_CASE("reachability frontier and cap behavior") {
  // climb: layered frontier, converges
  Game g = load_game(corpus + "/climb.game.json");
  SmtBackend b(g.vocab);
  SolveResult r = solve_reachability(g, Perspective::Controller, b);
  REQUIRE(r.status == SolveStatus::Converged);
  CHECK(b.equivalent(r.region, parse_constraint("x >= 19 && x <= 20", g.vocab)));
  CHECK(r.artifacts.frontier.size() == 2);
  GridBox box;
  box.ranges["x"] = {0, 20};
  check_against_oracle(g, r.region, box, Perspective::Controller, b);

  // the diverging chain caps with an under-approximation
  Game n = small_game("x' == x + 1 || x' == x - 1", "x' == x", "F (x < 0)");
  SmtBackend nb(n.vocab);
  EngineOptions opts;
  opts.iteration_cap = 20;
  SolveResult rc = solve_reachability(n, Perspective::Controller, nb, opts);
  CHECK(rc.status == SolveStatus::CapExceeded);
  CHECK(rc.approx == Approx::Under);
  for (int i = 0; i <= 5; ++i) {
    Formula expect = parse_constraint("x < " + std::to_string(i), n.vocab);
    CHECK(nb.equivalent(rc.artifacts.iterates[i], expect));
  }
  // the chain is strictly growing: W_{i+1} never entails W_i
  for (int i = 3; i <= 4; ++i)
    CHECK_FALSE(nb.entails(rc.artifacts.iterates[i + 1], rc.artifacts.iterates[i]));
}

TEST_CASE("frontier layers are pairwise disjoint") {
  Game g = load_game(corpus + "/climb.game.json");
  SmtBackend b(g.vocab);
  SolveResult r = solve_reachability(g, Perspective::Controller, b);
  const auto& c = r.artifacts.frontier;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      CHECK_FALSE(b.check(Formula::conj2(c[i], c[j])).sat);
}

TEST_CASE("buchi solver on jump and frozen games") {
  Game g = small_game("x' == 1 || x' == 2", "x' == x", "G F (x == 1 || x == 2)");
  SmtBackend b(g.vocab);
  SolveResult r = solve_buchi(g, Perspective::Controller, b);
  REQUIRE(r.status == SolveStatus::Converged);
  CHECK(r.region.is_true());
  CHECK(r.artifacts.violations.empty());

  Game f = small_game("x' == x", "x' == x", "G F (x == 1)");
  SmtBackend fb(f.vocab);
  SolveResult rf = solve_buchi(f, Perspective::Controller, fb);
  REQUIRE(rf.status == SolveStatus::Converged);
  CHECK(fb.equivalent(rf.region, parse_constraint("x == 1", f.vocab)));

  Game z = small_game("x' == x", "x' == x", "G F (x == 1 && x == 2)");
  SmtBackend zb(z.vocab);
  CHECK(solve_buchi(z, Perspective::Controller, zb).region.is_false());
}

TEST_CASE("buchi matches the oracle on the bounded patrol game") {
  Game g = load_game(corpus + "/gf_patrol.game.json");
  SmtBackend b(g.vocab);
  SolveResult r = solve_buchi(g, Perspective::Controller, b);
  REQUIRE(r.status == SolveStatus::Converged);
  GridBox box;
  box.ranges["x"] = {0, 5};
  check_against_oracle(g, r.region, box, Perspective::Controller, b);
  CHECK(b.equivalent(r.region, parse_constraint("x >= 0 && x <= 5", g.vocab)));
}

TEST_CASE("cobuchi composes safety core and attractor") {
  Game g = load_game(corpus + "/sort3.game.json");
  SmtBackend b(g.vocab);
  SolveResult r = solve_cobuchi(g, Perspective::Controller, b);
  REQUIRE(r.status == SolveStatus::Converged);
  CHECK(r.region.is_true());
  CHECK(b.equivalent(r.artifacts.safety_core, parse_constraint("a >= b && b >= c", g.vocab)));
  GridBox box;
  box.ranges["a"] = {0, 3};
  box.ranges["b"] = {0, 3};
  box.ranges["c"] = {0, 3};
  check_against_oracle(g, r.region, box, Perspective::Controller, b);
  REQUIRE(r.strategy);
}

TEST_CASE("environment perspective reachability") {
  // E wants F(x == 0); C moves first trying to stay away but only drifts up/stay
  Game g = small_game("x' == x + 1 || x' == x", "x' == x - 1 || x' == x", "F (x == 0)",
                      std::pair<long, long>{0, 6});
  SmtBackend b(g.vocab);
  SolveResult r = solve_reachability(g, Perspective::Environment, b);
  REQUIRE(r.status == SolveStatus::Converged);
  GridBox box;
  box.ranges["x"] = {0, 6};
  auto oracle = explicit_solve(g, box, ObjectiveKind::Reachability,
                               parse_constraint("x == 0", g.vocab), Perspective::Environment);
  for (const auto& s : box.states())
    CHECK(eval_formula(r.region, s) ==
          (std::find(oracle.begin(), oracle.end(), s) != oracle.end()));
}

TEST_CASE("degenerate objectives short-circuit") {
  Game g = small_game("x' == x", "x' == x", "G (x != x)");
  SmtBackend b(g.vocab);
  CHECK(solve_safety(g, Perspective::Controller, b).region.is_false());
  Game h = small_game("x' == x", "x' == x", "F (x == x)");
  SmtBackend hb(h.vocab);
  CHECK(solve_reachability(h, Perspective::Controller, hb).region.is_true());
}
