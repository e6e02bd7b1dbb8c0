#pragma once

#include <string>
#include <vector>

#include "lgs/automaton.hpp"
#include "lgs/formula.hpp"
#include "lgs/solver.hpp"

namespace lgs {

// Mealy-style strategy automaton. Environment states are the memory; from an
// environment state the edge whose guard holds at the current game state
// selects a controller state, whose label (a constraint over V and V')
// constrains the controller's move. After the move, the controller state's
// outgoing edge whose guard holds at the reached state selects the next
// memory state; the opponent then moves.
struct StrategyAutomaton {
  struct EnvState {
    int id = 0;
    Formula region = Formula::tru();  // domain of the strategy at this memory
  };
  struct CtrlState {
    int id = 0;
    Formula move = Formula::tru();  // over V and V'
  };
  struct Edge {
    int from = 0;
    Formula guard = Formula::tru();  // over V
    int to = 0;
  };

  std::vector<EnvState> env_states;
  std::vector<CtrlState> ctrl_states;
  std::vector<Edge> env_to_ctrl;
  std::vector<Edge> ctrl_to_env;
  int initial_env = 0;

  bool memoryless() const { return env_states.size() == 1; }
};

std::string strategy_to_json(const StrategyAutomaton& s);
StrategyAutomaton strategy_from_json(const std::string& text, const Vocabulary& vocab);

// DOT rendering: controller states are boxes labelled with the move
// constraint, environment states ellipses; edge labels carry guards. The
// emitted subset round-trips through strategy_from_dot.
std::string strategy_to_dot(const StrategyAutomaton& s);
StrategyAutomaton strategy_from_dot(const std::string& text, const Vocabulary& vocab);

// Finite-memory strategy for the base game from a memoryless strategy of the
// product game: memory states are automaton states, controller states are
// (product move, automaton successor) pairs, and move labels lose their
// automaton-variable conjuncts by substitution.
StrategyAutomaton lift_strategy(const StrategyAutomaton& product_strategy,
                                const SymbolicBuchiAutomaton& a, const std::string& qvar,
                                SmtBackend& backend);

}  // namespace lgs
