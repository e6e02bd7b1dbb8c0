#pragma once

#include "lgs/formula.hpp"
#include "lgs/game.hpp"

namespace lgs {

// Controllable-predecessor builders. All results are quantified formulas
// over the unprimed game variables; callers run qelim.
struct CpSpec {
  enum class Kind { Plain, Safe, Reach, ReachPerMove, SafePerMove, StepC, StepE };
  Kind kind = Kind::Plain;
  Formula x = Formula::tru();     // Safe / Reach / ReachPerMove
  Formula move = Formula::tru();  // ReachPerMove: one deterministic Con_i

  static CpSpec plain() { return {Kind::Plain, Formula::tru(), Formula::tru()}; }
  static CpSpec safe(Formula x) { return {Kind::Safe, std::move(x), Formula::tru()}; }
  static CpSpec reach(Formula x) { return {Kind::Reach, std::move(x), Formula::tru()}; }
  static CpSpec reach_per_move(Formula x, Formula move) {
    return {Kind::ReachPerMove, std::move(x), std::move(move)};
  }
  static CpSpec safe_per_move(Formula x, Formula move) {
    return {Kind::SafePerMove, std::move(x), std::move(move)};
  }
  static CpSpec step_c() { return {Kind::StepC, Formula::tru(), Formula::tru()}; }
  static CpSpec step_e() { return {Kind::StepE, Formula::tru(), Formula::tru()}; }
};

// In the Controller perspective the protagonist owns the Con move and the
// Env reply is universal; the Environment perspective dualizes the
// quantifiers while Player C still moves first. Quantifiers are relativized
// to the declared variable domains.
Formula build_cp(const Game& g, const CpSpec& spec, Perspective persp, const Formula& y);

}  // namespace lgs
