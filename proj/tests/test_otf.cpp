#include <random>

#include "doctest.h"
#include "lgs/oracle.hpp"
#include "lgs/otf.hpp"
#include "lgs/parser.hpp"

using namespace lgs;

namespace {

const std::string corpus = LGS_CORPUS_DIR;

Game toggle_game() { return load_game(corpus + "/gf_toggle.game.json"); }

SymbolicBuchiAutomaton toggle_ucw(const Game& g) {
  return load_automaton(corpus + "/gf_toggle_neg.aut.json", g.vocab);
}

}  // namespace

TEST_CASE("initial vector marks exactly the initial state") {
  Game g = toggle_game();
  SymbolicBuchiAutomaton a = toggle_ucw(g);
  CountingVector c0 = initial_vector(a);
  CHECK(c0 == CountingVector{0, -1, -1, -1});
  CHECK(vector_to_string(c0) == "⟨0,-1,-1,-1⟩");
  int nonneg = 0;
  for (long v : c0) nonneg += v >= 0;
  CHECK(nonneg == 1);
}

TEST_CASE("succ_k reproduces the worked determinization step") {
  Game g = toggle_game();
  SymbolicBuchiAutomaton a = toggle_ucw(g);
  CountingVector cd{0, -1, 2, 1};
  CountingVector ce = succ_k(cd, {{"x", Rat(1)}}, a, 2);
  CHECK(ce[2] == -1);
  CHECK(ce[3] == 2);
  // a lone non-final self-looping state never moves its count
  SymbolicBuchiAutomaton one;
  one.num_states = 1;
  one.initial = {0};
  one.transitions = {{0, parse_constraint("true", g.vocab), 0}};
  CountingVector c0 = initial_vector(one);
  CHECK(succ_k(c0, {{"x", Rat(5)}}, one, 2) == c0);
}

TEST_CASE("symbolic successor formula agrees with the function") {
  Game g = toggle_game();
  SymbolicBuchiAutomaton a = toggle_ucw(g);
  const int k = 2;
  auto counters = counter_vars(g, a);
  Vocabulary v;
  v.declare("x", Sort::Int);
  for (const auto& c : counters) v.declare(c, Sort::Int, VarRole::Automaton);
  Formula sf = succ_k_formula(a, k, counters, v);
  for (long x = 0; x <= 3; ++x)
    for (long a0 : {-1L, 0L, 3L})
      for (long a1 : {-1L, 1L})
        for (long a2 : {-1L, 2L})
          for (long a3 : {0L, 3L}) {
            CountingVector c{a0, a1, a2, a3};
            CountingVector cn = succ_k(c, {{"x", Rat(x)}}, a, k);
            Valuation val{{"x", Rat(x)}};
            for (std::size_t i = 0; i < counters.size(); ++i) {
              val[counters[i]] = Rat(c[i]);
              val[Vocabulary::primed(counters[i])] = Rat(cn[i]);
            }
            REQUIRE(eval_formula(sf, val));
            // determinism: any deviation in one coordinate is rejected
            val[Vocabulary::primed(counters[2])] = Rat(cn[2] + 1);
            REQUIRE_FALSE(eval_formula(sf, val));
          }
}

TEST_CASE("solve_k at the worked example equals the buchi region") {
  Game g = toggle_game();
  SymbolicBuchiAutomaton a = toggle_ucw(g);
  SmtBackend b(g.vocab);
  KSolve ks = solve_k(g, a, 2, Perspective::Controller);
  REQUIRE(ks.status == SolveStatus::Converged);
  CHECK(b.check(ks.at_initial).sat);
  CHECK(b.is_valid(ks.at_initial));  // solve_buchi yields true on this game
  // explicit k-safety oracle on a box agrees
  GridBox box;
  box.ranges["x"] = {0, 3};
  auto oracle = explicit_k_region(g, box, a, 2, Perspective::Controller);
  CHECK(oracle.size() == box.size());
}

TEST_CASE("counting vectors never escape their bounds") {
  Game g = toggle_game();
  SymbolicBuchiAutomaton a = toggle_ucw(g);
  const int k = 1;
  CountingVector c = initial_vector(a);
  for (long x : {0L, 1L, 2L, 0L, 0L, 1L, 0L, 0L, 0L, 2L}) {
    c = succ_k(c, {{"x", Rat(x)}}, a, k);
    for (long e : c) {
      CHECK(e >= -1);
      CHECK(e <= k + 1);
    }
  }
  // once every branch is unsafe it stays unsafe (absorption at k+1)
  CountingVector sat(static_cast<std::size_t>(a.num_states), k + 1);
  CountingVector nxt = succ_k(sat, {{"x", Rat(0)}}, a, k);
  for (long e : nxt) CHECK((e == -1 || e == k + 1));
}

TEST_CASE("otf loop converges on the toggle game at k = 0") {
  Game g = toggle_game();
  SymbolicBuchiAutomaton ucw = toggle_ucw(g);
  SymbolicBuchiAutomaton dba = load_automaton(corpus + "/gf_toggle.aut.json", g.vocab);
  SmtBackend b(g.vocab);
  OtfResult r = otf_loop(g, dba, ucw, b);
  REQUIRE(r.status == OtfStatus::Converged);
  CHECK(r.k_used == 0);
  CHECK(r.violations.empty());
  CHECK(b.is_valid(r.under));
  CHECK(b.equivalent(r.under, r.over));
}

TEST_CASE("dest_pair folds a play through the counting step") {
  Game g = toggle_game();
  SymbolicBuchiAutomaton a = toggle_ucw(g);
  std::vector<Valuation> just_start{{{"x", Rat(5)}}};
  auto [s, c] = dest_pair(just_start, a, 2);
  CHECK(s.at("x") == Rat(5));
  CHECK(c == initial_vector(a));
  std::vector<Valuation> play{{{"x", Rat(5)}}, {{"x", Rat(1)}}, {{"x", Rat(1)}}};
  auto [s2, c2] = dest_pair(play, a, 2);
  CHECK(s2.at("x") == Rat(1));
  CountingVector manual = initial_vector(a);
  manual = succ_k(manual, {{"x", Rat(5)}}, a, 2);
  manual = succ_k(manual, {{"x", Rat(1)}}, a, 2);
  CHECK(c2 == manual);
}

TEST_CASE("otf strategy moves stay inside the winning product") {
  Game g = toggle_game();
  SymbolicBuchiAutomaton a = toggle_ucw(g);
  SmtBackend b(g.vocab);
  const int k = 2;
  KSolve ks = solve_k(g, a, k, Perspective::Controller);
  REQUIRE(ks.status == SolveStatus::Converged);
  std::mt19937_64 rng(99);
  int plays = 60, steps = 12;
  for (int p = 0; p < plays; ++p) {
    std::vector<Valuation> play{{{"x", Rat(static_cast<long>(rng() % 4))}}};
    for (int t = 0; t < steps; ++t) {
      auto [s, c] = dest_pair(play, a, k);
      for (long e : c) REQUIRE(e <= k);  // never leaves the safe vectors
      Formula sigma = otf_strategy_moves(ks, a, k, s, c, b);
      SatResult pick = b.check(sigma);
      REQUIRE_MESSAGE(pick.sat, "strategy empty on a winning product state");
      Valuation nxt{{"x", pick.model.at("x")}};
      play.push_back(nxt);      // controller move
      play.push_back(nxt);      // environment copies
    }
  }
}
