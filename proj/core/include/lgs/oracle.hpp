#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lgs/automaton.hpp"
#include "lgs/game.hpp"
#include "lgs/ltl.hpp"
#include "lgs/strategy.hpp"

namespace lgs {

// Closed integer box per variable; the explicit-state reference solver and
// the play simulator work over these. The region oracle is restricted to
// Int-sorted games.
struct GridBox {
  std::map<std::string, std::pair<long, long>> ranges;
  std::size_t state_limit = 1000000;

  std::size_t size() const;
  std::vector<Valuation> states() const;  // row-major enumeration
  bool contains(const Valuation& s) const;
};

enum class ObjectiveKind { Safety, Reachability, Buchi, CoBuchi };

// Exact winning set of the protagonist on the box-clipped game by classical
// explicit fixpoints on the alternating graph (controller moves first; moves
// leaving the box are removed). Throws if clipping leaves a state with no
// move for either player.
std::vector<Valuation> explicit_solve(const Game& g, const GridBox& box, ObjectiveKind kind,
                                      const Formula& predicate, Perspective persp);

// Convenience: solve using classify(g.objective).
std::vector<Valuation> explicit_solve_auto(const Game& g, const GridBox& box, Perspective persp);

// Explicit k-bounded-safety region of the counting product: protagonist
// keeps every counter of the determinized subset construction at most k.
std::vector<Valuation> explicit_k_region(const Game& g, const GridBox& box,
                                         const SymbolicBuchiAutomaton& a, int k,
                                         Perspective persp);

// CSV export: sorted coordinate rows.
std::string region_to_csv(const std::vector<Valuation>& states,
                          const std::vector<std::string>& vars);

struct PlayResult {
  std::vector<Valuation> states;   // s0 s1 ... (both players' positions)
  bool strategy_hole = false;      // undefined strategy at a reached state
  bool safety_violated = false;    // some position outside the predicate
  bool target_hit = false;         // some position inside the predicate
  std::map<std::string, long> visit_counts;  // filled by the caller's monitor
};

// Plays the strategy automaton against environment moves sampled uniformly
// from up to eight distinct successors; deterministic for a fixed seed.
PlayResult simulate(const Game& g, const StrategyAutomaton& strategy, const Valuation& start,
                    int steps, std::uint64_t seed,
                    const std::optional<Formula>& monitor_predicate = std::nullopt);

}  // namespace lgs
