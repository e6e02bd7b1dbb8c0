#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgs/cp.hpp"
#include "lgs/game.hpp"
#include "lgs/strategy.hpp"

namespace lgs {

enum class SolveStatus { Converged, CapExceeded };

// How the returned region relates to the true winning region when the loop
// was cut by the iteration cap. Converged results from these engines are
// always exact.
enum class Approx { Exact, Under, Over, Unknown };

struct SolveArtifacts {
  std::vector<Formula> iterates;   // outer chain, first element is the seed
  std::vector<Formula> frontier;   // reachability layers C_0, C_1, ...
  std::vector<Formula> inner_env;  // Buchi: H_E per inner iteration (last round)
  Formula env_region = Formula::fals();   // Buchi: W_E of the final round
  Formula safety_core = Formula::fals();  // co-Buchi: phase-1 fixpoint
  int iterations = 0;
  // invariant breaches (chain monotonicity, frontier disjointness, strategy
  // coverage); empty on every healthy run
  std::vector<std::string> violations;
};

struct SolveResult {
  Formula region = Formula::fals();
  SolveStatus status = SolveStatus::Converged;
  Approx approx = Approx::Exact;
  std::optional<StrategyAutomaton> strategy;
  SolveArtifacts artifacts;
};

struct EngineOptions {
  int iteration_cap = 500;
  bool want_strategy = true;
};

// The four simple-game solvers. Each requires the game objective to classify
// into the matching shape; regions are exact on convergence (chains cut by
// the cap are labelled Under for growing, Over for shrinking loops).
// Strategies are extracted for finitely nondeterministic games in the
// Controller perspective.
SolveResult solve_safety(const Game& g, Perspective persp, SmtBackend& backend,
                         const EngineOptions& opts = {});
SolveResult solve_reachability(const Game& g, Perspective persp, SmtBackend& backend,
                               const EngineOptions& opts = {});
SolveResult solve_cobuchi(const Game& g, Perspective persp, SmtBackend& backend,
                          const EngineOptions& opts = {});
SolveResult solve_buchi(const Game& g, Perspective persp, SmtBackend& backend,
                        const EngineOptions& opts = {});

// Dispatch on classify(g.objective); throws if the objective is not simple.
SolveResult solve_simple(const Game& g, Perspective persp, SmtBackend& backend,
                         const EngineOptions& opts = {});

}  // namespace lgs
