#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgs/automaton.hpp"
#include "lgs/engines.hpp"
#include "lgs/game.hpp"

namespace lgs {

// Per-automaton-state visit counter in {-1, 0, ..., k+1}; -1 marks states
// absent from the tracked subset, k+1 is the absorbing unsafe value.
using CountingVector = std::vector<long>;

std::string vector_to_string(const CountingVector& c);  // angle-bracket form

// <0, -1, ..., -1>: the initial subset {q0}, count 0 even when q0 is final.
CountingVector initial_vector(const SymbolicBuchiAutomaton& a);

// One determinized step on letter s:
//   c'(q) = max { min(c(p) + final(q), k+1) | (p,s,q) enabled, c(p) >= 0 }
// and -1 when no enabled predecessor is present.
CountingVector succ_k(const CountingVector& c, const Valuation& s,
                      const SymbolicBuchiAutomaton& a, int k);

// Names of the counter variables used by the symbolic encoding.
std::vector<std::string> counter_vars(const Game& g, const SymbolicBuchiAutomaton& a);

// Succ_k(c, V, c') as a formula: counters as bounded Int variables, the
// max/min structure expanded into ordered case splits over predecessor sets.
Formula succ_k_formula(const SymbolicBuchiAutomaton& a, int k,
                       const std::vector<std::string>& counters, const Vocabulary& vocab);

struct KSolve {
  Game product;                       // game variables plus counters
  std::vector<std::string> counters;  // counter variable names
  Formula region = Formula::fals();   // GFP over (V, c)
  Formula at_initial = Formula::fals();  // region instantiated at c0
  SolveStatus status = SolveStatus::Converged;
  int iterations = 0;
};

// Greatest fixpoint of the k-bounded safety predecessor on the determinized
// product of g with a (viewed as a universal co-Buchi automaton). In the
// Controller perspective the protagonist keeps every counter at most k; the
// Environment perspective dualizes the move quantifiers with C still first.
KSolve solve_k(const Game& g, const SymbolicBuchiAutomaton& a, int k, Perspective persp,
               const EngineOptions& opts = {});

enum class OtfStatus { Converged, KCapReached, FixpointCapReached };

struct OtfResult {
  Formula under = Formula::fals();  // W_U, grows with k
  Formula over = Formula::tru();    // W_O
  int k_used = 0;
  OtfStatus status = OtfStatus::Converged;
  std::vector<Formula> under_by_k;
  std::vector<Formula> over_by_k;
  std::vector<std::string> violations;  // monotonicity of W_U in k
  std::optional<KSolve> winning_solve;  // controller-side solve at k_used
};

struct OtfOptions {
  int k_max = 10;
  EngineOptions engine;
};

// The increasing-k loop: the controller side of A_not_psi yields W_U(k), the
// complement of the opponent side of A_psi yields W_O(k); stop at W_U == W_O
// or at k_max. Both automata must be complete and single-initial.
OtfResult otf_loop(const Game& g, const SymbolicBuchiAutomaton& a_psi,
                   const SymbolicBuchiAutomaton& a_negpsi, SmtBackend& backend,
                   const OtfOptions& opts = {});

// Winning product state reached by a play prefix (base case: (s0, c0)).
std::pair<Valuation, CountingVector> dest_pair(const std::vector<Valuation>& play,
                                               const SymbolicBuchiAutomaton& a, int k);

// sigma_prod(s1, c1): constraint over V describing the moves that stay inside
// the winning product region. Empty result means (s1, c1) is outside W.
Formula otf_strategy_moves(const KSolve& solve, const SymbolicBuchiAutomaton& a, int k,
                           const Valuation& s1, const CountingVector& c1, SmtBackend& backend);

}  // namespace lgs
