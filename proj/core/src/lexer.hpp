#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "lgs/errors.hpp"

namespace lgs::detail {

enum class Tok {
  Ident, Number, LParen, RParen, AndAnd, OrOr, Not,
  Lt, Le, EqEq, Ge, Gt, Ne, Plus, Minus, Star, Slash, End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

// Tokenizer shared by the constraint and LTL parsers. Primes attach to the
// preceding identifier; numbers keep '.', '/' handled by the parser.
inline std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string t, std::size_t p) { out.push_back({k, std::move(t), p}); };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) id += s[i++];
      while (i < s.size() && s[i] == '\'') id += s[i++];
      push(Tok::Ident, id, start);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) num += s[i++];
      push(Tok::Number, num, start);
      continue;
    }
    switch (c) {
      case '(': push(Tok::LParen, "(", start); ++i; break;
      case ')': push(Tok::RParen, ")", start); ++i; break;
      case '+': push(Tok::Plus, "+", start); ++i; break;
      case '-': push(Tok::Minus, "-", start); ++i; break;
      case '*': push(Tok::Star, "*", start); ++i; break;
      case '/': push(Tok::Slash, "/", start); ++i; break;  // only valid inside rationals "p/q"
      case '&':
        if (i + 1 < s.size() && s[i + 1] == '&') {
          push(Tok::AndAnd, "&&", start);
          i += 2;
        } else {
          throw ParseError("expected '&&'", start);
        }
        break;
      case '|':
        if (i + 1 < s.size() && s[i + 1] == '|') {
          push(Tok::OrOr, "||", start);
          i += 2;
        } else {
          throw ParseError("expected '||'", start);
        }
        break;
      case '!':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          push(Tok::Ne, "!=", start);
          i += 2;
        } else {
          push(Tok::Not, "!", start);
          ++i;
        }
        break;
      case '<':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          push(Tok::Le, "<=", start);
          i += 2;
        } else {
          push(Tok::Lt, "<", start);
          ++i;
        }
        break;
      case '>':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          push(Tok::Ge, ">=", start);
          i += 2;
        } else {
          push(Tok::Gt, ">", start);
          ++i;
        }
        break;
      case '=':
        if (i + 1 < s.size() && s[i + 1] == '=') {
          push(Tok::EqEq, "==", start);
          i += 2;
        } else {
          throw ParseError("expected '=='", start);
        }
        break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

}  // namespace lgs::detail
