#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lgs/formula.hpp"
#include "lgs/vocab.hpp"

namespace lgs {

// LTL over atomic linear constraints on unprimed variables. Release exists
// only internally (negation normal form); it has no surface syntax.
class LtlFormula {
 public:
  enum class Kind { Atom, Not, And, Or, Next, Until, Release, Finally, Globally };

  static LtlFormula atom(Formula constraint);  // quantifier-free, unprimed
  static LtlFormula lnot(const LtlFormula& f);
  static LtlFormula land(std::vector<LtlFormula> fs);
  static LtlFormula lor(std::vector<LtlFormula> fs);
  static LtlFormula next(const LtlFormula& f);
  static LtlFormula until(const LtlFormula& a, const LtlFormula& b);
  static LtlFormula release(const LtlFormula& a, const LtlFormula& b);
  static LtlFormula finally(const LtlFormula& f);
  static LtlFormula globally(const LtlFormula& f);
  static LtlFormula implies(const LtlFormula& a, const LtlFormula& b) {
    return lor({lnot(a), b});
  }

  Kind kind() const;
  const Formula& constraint() const;             // Atom
  const std::vector<LtlFormula>& children() const;  // all composite kinds

  bool is_temporal_free() const;
  // Boolean combination of atoms as one Formula; requires is_temporal_free.
  Formula flatten_boolean() const;

  std::string to_surface() const;
  std::string repr() const;
  bool structurally_equal(const LtlFormula& o) const { return repr() == o.repr(); }

  // Distinct atomic constraints, in first-occurrence order.
  std::vector<Formula> atoms() const;

  struct Node;  // implementation detail

 private:
  explicit LtlFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Parses the LTL surface syntax: the constraint grammar extended with prefix
// G, F, X and infix U; temporal operators bind tighter than && and ||.
// Primed variables inside atoms are rejected.
LtlFormula parse_ltl(const std::string& text, const Vocabulary& vocab);

// Negation normal form of the negation: temporal duals pushed inward, atoms
// negated by flipping the comparison. The result has no Not nodes.
LtlFormula negate_nnf(const LtlFormula& f);

// Negation normal form of the formula itself.
LtlFormula to_nnf(const LtlFormula& f);

struct SpecClass {
  enum class Kind { Safety, Reachability, Buchi, CoBuchi, General };
  Kind kind = Kind::General;
  Formula predicate;  // the X in G X / F X / GF X / FG X
};

// Purely syntactic classification into the four simple shapes; anything with
// nested temporal structure is General.
SpecClass classify(const LtlFormula& f);

// Satisfaction of an LTL formula on the ultimately periodic word
// prefix . cycle^omega (cycle nonempty). The independent semantics used by
// translation tests.
bool eval_ltl_lasso(const LtlFormula& f, const std::vector<std::map<std::string, Rat>>& prefix,
                    const std::vector<std::map<std::string, Rat>>& cycle);

}  // namespace lgs
