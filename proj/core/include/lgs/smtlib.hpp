#pragma once

#include <string>

#include "lgs/formula.hpp"
#include "lgs/vocab.hpp"

namespace lgs {

// SMT-LIB 2 term for a formula (quantifiers allowed).
std::string to_smt2_term(const Formula& f);

// Full SMT-LIB 2 script: one declare-fun per free variable plus the
// assertion. Primed names are quoted with |...|.
std::string to_smt2_script(const Formula& f, const Vocabulary& vocab);

}  // namespace lgs
