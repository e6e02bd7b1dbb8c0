#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lgs/formula.hpp"
#include "lgs/vocab.hpp"

namespace lgs::detail {

bool all_int_vars(const std::map<std::string, Rat>& coeffs, const Vocabulary& vocab);

// Canonical atom form: integer coefficients with gcd 1, positive leading
// coefficient, and integer-tightened bounds when every variable is Int.
// The result folds to True/False when ground or trivially decided.
Formula normalize_atom(LinearAtom a, const Vocabulary& vocab);
Formula normalize_div(DivAtom d, const Vocabulary& vocab);

// A conjunction of literals, the working unit of quantifier elimination.
struct Cube {
  std::vector<LinearAtom> atoms;
  std::vector<DivAtom> divs;

  // Adds a literal; returns false if the cube became trivially inconsistent.
  bool add(const Formula& literal, const Vocabulary& vocab);
  Formula to_formula() const;
};

// Bound-map based consistency check and redundancy removal (same coefficient
// vector only; no cross-vector reasoning). Returns false if inconsistent.
bool minimize_cube(Cube& c, const Vocabulary& vocab);

// Expands a quantifier-free NNF formula into cubes, pruning inconsistent
// ones. Throws BackendError if `max_cubes` is exceeded.
std::vector<Cube> to_cubes(const Formula& f, const Vocabulary& vocab, std::size_t max_cubes);

// Drops cubes whose literal set is a superset of another cube's (the
// stronger disjunct is absorbed by the weaker one).
void absorb_cubes(std::vector<Cube>& cubes);

Formula cubes_to_formula(const std::vector<Cube>& cubes);

// b => a for atoms over the same coefficient vector.
bool atom_implies(const LinearAtom& b, const LinearAtom& a);

// Set difference c \ union(g) as cubes, by splitting c along the literals of
// overlapping g-cubes. Exact; pieces are minimized but may overlap g-cubes
// pairwise-emptily.
std::vector<Cube> subtract_cubes(const Cube& c, const std::vector<Cube>& g,
                                 const Vocabulary& vocab, std::size_t max_out);

// strong => weak, literal-wise (syntactic; exact when it answers true).
bool cube_implies(const Cube& strong, const Cube& weak);

// a and b partition the space (integer-tightened adjacency counts).
bool atom_complementary(const LinearAtom& a, const LinearAtom& b, const Vocabulary& vocab);

// Accumulated bound knowledge per coefficient vector; decides atoms that are
// entailed or contradicted by a surrounding conjunction.
class BoundCtx {
 public:
  enum class Truth { True, False, Unknown };
  // strengthen with a known fact (normalized atom)
  void add(const LinearAtom& a);
  Truth eval(const LinearAtom& a) const;
  // variables pinned to a constant by a unit equality
  const std::map<std::string, Rat>& pinned() const { return pinned_; }

 private:
  struct Entry {
    std::optional<std::pair<Rat, bool>> lower, upper;  // value, strict
    std::optional<Rat> eq;
    std::set<std::string> ne;
  };
  std::map<std::string, Entry> table_;
  std::map<std::string, Rat> pinned_;
};

}  // namespace lgs::detail
