#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgs/formula.hpp"
#include "lgs/solver.hpp"
#include "lgs/vocab.hpp"

namespace lgs {

enum class AcceptanceView { Buchi, CoBuchi, UniversalCoBuchi, Safety };

struct AutTransition {
  int src = 0;
  Formula guard;  // quantifier-free, over unprimed variables
  int dst = 0;
};

// Buchi automaton over V-state sequences with constraint-labelled edges.
// State ids are dense 0..num_states-1; the set of initial states is never
// empty. The same structure serves all four acceptance views.
struct SymbolicBuchiAutomaton {
  int num_states = 0;
  std::vector<int> initial;
  std::vector<int> final_states;
  AcceptanceView view = AcceptanceView::Buchi;
  std::vector<AutTransition> transitions;

  bool is_final(int q) const;
  std::vector<const AutTransition*> from(int q) const;
  void validate() const;  // invariant check, throws SchemaError
};

// Completion: adds one non-final sink with a true self-loop and, per state,
// the residual guard not covered by existing edges. Under the Buchi view the
// language is unchanged; under the universal co-Buchi view as well, since
// added runs visit final states finitely often (the sink is non-final).
SymbolicBuchiAutomaton complete(const SymbolicBuchiAutomaton& a, SmtBackend& backend);

// True iff there is a single initial state and no V-state enables two
// transitions from the same state into different targets. A backend Unknown
// makes the check fail with BackendError ("cannot certify deterministic").
bool is_deterministic(const SymbolicBuchiAutomaton& a, SmtBackend& backend);

// Encodes the concrete transition relation as a formula over (q, V, q'):
// the disjunction over transitions of q=src && guard && q'=dst.
Formula transition_formula(const SymbolicBuchiAutomaton& a, const std::string& state_var);

// Reorders state ids into BFS order from the initial states (ties by
// previous id), dropping unreachable states.
SymbolicBuchiAutomaton canonicalize(const SymbolicBuchiAutomaton& a);

// JSON file format:
// { "states": N, "initial": [ids], "final": [ids],
//   "view": "buchi"|"cobuchi"|"ucw"|"safety",
//   "transitions": [{"src": id, "guard": "<constraint>", "dst": id}] }
SymbolicBuchiAutomaton load_automaton(const std::string& path, const Vocabulary& vocab);
SymbolicBuchiAutomaton parse_automaton_json(const std::string& text, const Vocabulary& vocab);
std::string automaton_to_json(const SymbolicBuchiAutomaton& a);

// Membership of the lasso word prefix.cycle^omega under the Buchi view:
// some run visits a final state infinitely often. Used as the language
// oracle in translation tests and small enough to be exhaustive.
bool lasso_accepted(const SymbolicBuchiAutomaton& a,
                    const std::vector<std::map<std::string, Rat>>& prefix,
                    const std::vector<std::map<std::string, Rat>>& cycle);

}  // namespace lgs
