#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lgs/engines.hpp"
#include "lgs/game.hpp"
#include "lgs/otf.hpp"

namespace lgs {

enum class EngineChoice { Auto, Simple, ProductGF, ProductFG, Otf };

struct SolveOptions {
  EngineChoice engine = EngineChoice::Auto;
  int iteration_cap = 500;
  int k_max = 10;
  int backend_timeout_ms = 0;
  std::optional<Player> player_override;
  std::set<std::string> emit;  // region_smt2, strategy_dot, strategy_json, report_json
  std::string out_dir = ".";
  std::string base_dir;  // resolves relative automaton override paths
};

enum class Verdict { Realizable, Unrealizable, Partial, UnknownUnder, CapReached, RegionOnly };

std::string verdict_to_string(Verdict v);

struct Report {
  std::string game;
  std::string engine_used;  // simple-safety, simple-reachability, ..., product-gf, product-fg, otf
  Formula region = Formula::fals();          // main region (exact or W_U)
  std::optional<Formula> region_over;        // OTF W_O
  Verdict verdict = Verdict::RegionOnly;
  SolveStatus status = SolveStatus::Converged;
  Approx approx = Approx::Exact;
  int iterations = 0;
  int k = -1;  // OTF only
  double seconds = 0.0;
  std::optional<StrategyAutomaton> strategy;  // over the game variables
  std::vector<std::string> violations;
  std::vector<std::size_t> iterate_sizes;
  std::vector<std::string> frontier_surface;
  std::string error;  // nonempty when the engine failed
};

// Realizability from an exact region: Realizable iff init is inside,
// Unrealizable iff init misses the region entirely, Partial otherwise.
Verdict realizability_exact(SmtBackend& backend, const Formula& region, const Formula& init,
                            const Formula& dom);

// From an under/over pair: init below W_U is Realizable, init outside W_O is
// Unrealizable, anything else stays open.
Verdict realizability_bounds(SmtBackend& backend, const Formula& under, const Formula& over,
                             const Formula& init, const Formula& dom);

// The top-level driver: simple objectives go to the matching fixpoint
// engine; otherwise the formula automaton (or its hand-encoded override) is
// tried for a deterministic Buchi product, then the negation for a
// deterministic co-Buchi product, and the counting determinization loop is
// the fallback. Engine failures are captured in the report.
Report dispatch(const Game& g, const SolveOptions& opts = {});

// Writes the requested artifacts; returns the created paths.
std::vector<std::string> emit_report(const Report& report, const Game& g,
                                     const SolveOptions& opts);

std::string report_to_json(const Report& report, const Game& g);

}  // namespace lgs
