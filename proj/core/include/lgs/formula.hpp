#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "lgs/rational.hpp"
#include "lgs/vocab.hpp"

namespace lgs {

enum class Cmp { Lt, Le, Eq, Ge, Gt, Ne };

Cmp negate_cmp(Cmp c);
Cmp flip_cmp(Cmp c);  // mirror around '=': a cmp b  <->  b flipped(cmp) a
std::string cmp_to_string(Cmp c);

// An affine expression  Σ coeffs[x]·x + constant  with exact rational
// coefficients. Zero coefficients are never stored.
struct LinExpr {
  std::map<std::string, Rat> coeffs;
  Rat constant = Rat(0);

  static LinExpr var(const std::string& name, const Rat& c = Rat(1));
  static LinExpr cons(const Rat& c);
  LinExpr& add(const LinExpr& other, const Rat& scale = Rat(1));
  LinExpr scaled(const Rat& s) const;
  bool is_constant() const { return coeffs.empty(); }
  bool mentions(const std::string& v) const { return coeffs.count(v) != 0; }
  Rat coeff(const std::string& v) const;
  bool operator==(const LinExpr& o) const = default;
};

// Atomic constraint  Σ coeffs·x  cmp  constant.
struct LinearAtom {
  std::map<std::string, Rat> coeffs;
  Cmp cmp = Cmp::Le;
  Rat constant = Rat(0);
  bool operator==(const LinearAtom& o) const = default;
};

// Divisibility atom  modulus | (Σ coeffs·x + constant), possibly negated.
// Not part of the surface syntax; integer quantifier elimination introduces
// these and they round-trip through SMT-LIB only.
struct DivAtom {
  Int modulus = Int(1);
  std::map<std::string, Rat> coeffs;
  Rat constant = Rat(0);
  bool negated = false;
  bool operator==(const DivAtom& o) const = default;
};

// First-order formulas over linear atoms, kept in negation normal form:
// negation exists only inside atoms (comparator polarity / div flag).
// Values are immutable and cheap to copy.
class Formula {
 public:
  enum class Kind { True, False, Atom, Div, And, Or, Exists, Forall };

  Formula() : Formula(tru()) {}

  static Formula tru();
  static Formula fals();
  static Formula boolean(bool b) { return b ? tru() : fals(); }
  static Formula atom(LinearAtom a);
  static Formula div(DivAtom d);
  // atom builder:  lhs cmp rhs
  static Formula cmp_expr(const LinExpr& lhs, Cmp cmp, const LinExpr& rhs);
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula conj2(const Formula& a, const Formula& b) { return conj({a, b}); }
  static Formula disj2(const Formula& a, const Formula& b) { return disj({a, b}); }
  static Formula neg(const Formula& f);
  static Formula implies(const Formula& a, const Formula& b) { return disj2(neg(a), b); }
  static Formula exists(std::vector<std::string> vars, const Formula& body);
  static Formula forall(std::vector<std::string> vars, const Formula& body);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_quantifier_free() const;
  const LinearAtom& atom_ref() const;
  const DivAtom& div_ref() const;
  const std::vector<Formula>& children() const;      // And / Or
  const std::vector<std::string>& bound_vars() const;  // Exists / Forall
  const Formula& body() const;                        // Exists / Forall

  void collect_free_vars(std::set<std::string>& out) const;
  std::set<std::string> free_vars() const;

  // Uniform variable renaming through `map`; names absent from the map are
  // kept. The map must be injective on the variables it touches.
  Formula rename_vars(const std::map<std::string, std::string>& map) const;

  // Capture-free substitution of variables by affine expressions. Bound
  // occurrences are untouched; substituting a bound name is an error.
  Formula substitute(const std::map<std::string, LinExpr>& sub) const;

  // Surface-syntax printing (guards, regions). Quantifiers and divisibility
  // atoms have no surface form and throw.
  std::string to_surface() const;
  // Deterministic compact form; used for structural comparison and debugging.
  std::string repr() const;

  std::size_t node_count() const;
  bool structurally_equal(const Formula& o) const;

  struct Node;  // implementation detail, defined in formula.cpp

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Truth of a quantifier-free formula under a total valuation.
bool eval_formula(const Formula& f, const std::map<std::string, Rat>& valuation);
Rat eval_expr(const LinExpr& e, const std::map<std::string, Rat>& valuation);

enum class RenameShift { Prime, Unprime, ToDoublePrime };

// Tier shift of every variable occurrence: Prime / ToDoublePrime move x to x'
// and x' to x''; Unprime moves x' to x and x'' to x'. Shifting past a tier
// boundary (x'' up, x down) is a renaming collision and throws.
Formula rename(const Formula& f, RenameShift shift);

}  // namespace lgs
