#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lgs {

// Base for everything thrown by the library.
struct LgsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Surface-syntax problems. `pos` is a 0-based offset into the input text.
struct ParseError : LgsError {
  ParseError(const std::string& msg, std::size_t pos)
      : LgsError(msg + " (at offset " + std::to_string(pos) + ")"), pos(pos) {}
  std::size_t pos;
};

// Malformed input files (game/automaton/strategy JSON).
struct SchemaError : LgsError {
  using LgsError::LgsError;
};

// The decision backend could not answer: resource budget exhausted, a query
// outside the supported fragment, or an internal inconsistency. Never folded
// into a boolean answer.
struct BackendError : LgsError {
  explicit BackendError(const std::string& msg, std::string offending = "")
      : LgsError(msg), offending_formula(std::move(offending)) {}
  std::string offending_formula;
};

// A fixpoint loop exceeded its iteration cap. Carries the loop name; the last
// iterate stays available through the solver artifacts.
struct IterationCapExceeded : LgsError {
  IterationCapExceeded(const std::string& loop, int cap)
      : LgsError("iteration cap " + std::to_string(cap) + " exceeded in " + loop),
        loop(loop),
        cap(cap) {}
  std::string loop;
  int cap;
};

}  // namespace lgs
