#pragma once

#include <chrono>
#include <cstddef>

#include "lgs/formula.hpp"
#include "lgs/vocab.hpp"

namespace lgs {

// Resource limits for the elimination engine. `timeout_ms == 0` means no
// deadline. Exhaustion raises BackendError; it is never reported as a truth
// value.
struct BackendLimits {
  std::size_t max_cubes = 1u << 20;
  int timeout_ms = 0;
};

namespace detail {
struct Budget {
  std::size_t max_cubes;
  bool has_deadline = false;
  std::chrono::steady_clock::time_point deadline{};
  std::size_t ops = 0;
  void tick(std::size_t n = 1);
  void check_cubes(std::size_t count) const;
};
}  // namespace detail

// Equivalence-preserving structural simplification: atom normalization,
// integer bound tightening, conjunction bound merging, disjunct absorption.
Formula simplify(const Formula& f, const Vocabulary& vocab);

// Quantifier elimination for mixed linear real/integer arithmetic.
// Real-sorted variables go through Fourier-Motzkin, integer-sorted ones
// through Cooper's method (divisibility atoms may appear in the result).
// The result is quantifier-free, simplified, and equivalent to `f` over the
// declared sorts.
Formula qelim(const Formula& f, const Vocabulary& vocab, detail::Budget& budget);

}  // namespace lgs
