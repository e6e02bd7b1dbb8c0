#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgs/automaton.hpp"
#include "lgs/formula.hpp"
#include "lgs/ltl.hpp"
#include "lgs/solver.hpp"

namespace lgs {

enum class Player { Controller, Environment };
enum class Perspective { Controller, Environment };

inline Perspective perspective_of(Player p) {
  return p == Player::Controller ? Perspective::Controller : Perspective::Environment;
}

struct GameVariable {
  std::string name;
  Sort sort = Sort::Int;
  std::optional<Rat> min, max;
};

// A two-player logical game: move constraints over V and V', an LTL objective
// over V, optional interval domains per variable, optional initial region.
// Player C moves first; `player` names the protagonist the solvers work for.
struct Game {
  std::string name;
  Vocabulary vocab;
  std::vector<GameVariable> variables;
  Formula con = Formula::tru();
  Formula env = Formula::tru();
  LtlFormula objective = LtlFormula::atom(Formula::tru());
  std::optional<Formula> init;
  Player player = Player::Controller;
  std::optional<std::string> automaton_path;      // hand-encoded A_psi override
  std::optional<std::string> automaton_neg_path;  // hand-encoded A_not_psi override
  std::optional<double> paper_time_s;             // soft wall-clock budget, informational
  std::string note;

  std::vector<std::string> state_vars() const;
  // Conjunction of the declared interval bounds, at prime tier 0, 1 or 2.
  Formula domain(int tier) const;
};

// Parses and validates a game file. Move completeness over the domain is
// checked for both players; a violation is reported with a concrete state
// that has no successor.
Game load_game(const std::string& path);
Game parse_game_json(const std::string& text, const std::string& name);

// Splits Con at top-level disjunctions and certifies each disjunct
// functional (deterministic). Returns nothing if some disjunct is not
// functional or the backend cannot certify it.
std::optional<std::vector<Formula>> fnd_moves(const Formula& con, const Game& game,
                                              SmtBackend& backend);

enum class ProductPolarity { Accepting, Rejecting };

// Product with a deterministic complete automaton: a fresh Int variable
// tracks the automaton state, both move relations advance it, and the
// objective becomes GF(q in F) (Accepting) or FG(q not in F) (Rejecting).
// Rejects automata that are nondeterministic or incomplete.
Game product(const Game& g, const SymbolicBuchiAutomaton& a, ProductPolarity polarity,
             SmtBackend& backend);

// Same construction without the determinism guard. Solving such a product
// under-approximates the real region (the opponent resolves automaton
// nondeterminism); exists for regression tests and experiments.
Game product_unchecked(const Game& g, const SymbolicBuchiAutomaton& a, ProductPolarity polarity,
                       SmtBackend& backend);

// Name of the automaton-state variable a product introduced.
std::string product_state_var(const Game& product_game);

// Region over V from a product region over V and the automaton variable:
// substitute q := q0 and simplify.
Formula project_initial_q(const Formula& wp, const std::string& qvar, int q0,
                          const Vocabulary& vocab);

}  // namespace lgs
