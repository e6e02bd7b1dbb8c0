#pragma once

#include <string>

#include "lgs/formula.hpp"
#include "lgs/vocab.hpp"

namespace lgs {

// Parses the constraint surface syntax:
//   expr := or ; or := and ("||" and)* ; and := un ("&&" un)*
//   un   := "!" un | "(" expr ")" | atom | "true" | "false"
//   atom := lin cmp lin ; cmp in { < <= == >= > != }
//   lin  := term (("+"|"-") term)* ; term := rat | rat "*" var | var
//   var  := ident | ident "'" | ident "''" ; rat := decimal or "p/q"
// A leading "-" on a term is accepted. Every variable must be declared in
// `vocab`; products of variables raise a nonlinearity error.
Formula parse_constraint(const std::string& text, const Vocabulary& vocab);

}  // namespace lgs
