#pragma once

#include <string>
#include <vector>

#include "cube.hpp"
#include "lgs/qe.hpp"

namespace lgs::detail {

// Eliminates one variable from one cube. Fourier-Motzkin for Real, Cooper
// for Int; the result is the disjunction of the returned cubes.
std::vector<Cube> eliminate_var_from_cube(const Cube& cube, const std::string& var,
                                          const Vocabulary& vocab, Budget& budget);

// Existential elimination of a block of variables from a quantifier-free
// body. Applies global one-point substitutions before expanding to cubes.
Formula eliminate_exists_block(const std::vector<std::string>& vars, const Formula& body,
                               const Vocabulary& vocab, Budget& budget);

}  // namespace lgs::detail
