#pragma once

#include "lgs/automaton.hpp"
#include "lgs/ltl.hpp"
#include "lgs/solver.hpp"

namespace lgs {

// LTL(V) to Buchi automaton by proposition abstraction: atomic constraints
// become opaque propositions, a tableau translation produces a generalized
// Buchi automaton, degeneralization (acceptance sets in index order, lowest
// first) yields a plain one, and edge guards are the conjunctions of the
// constraint literals chosen on that edge. The result is canonicalized and
// has a single initial state; it may be nondeterministic even when a
// deterministic automaton exists.
SymbolicBuchiAutomaton ltl_to_ba(const LtlFormula& phi, SmtBackend& backend);

}  // namespace lgs
