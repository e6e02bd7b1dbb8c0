#pragma once

#include <map>
#include <optional>
#include <string>

#include "lgs/formula.hpp"
#include "lgs/qe.hpp"
#include "lgs/vocab.hpp"

namespace lgs {

using Valuation = std::map<std::string, Rat>;

struct SatResult {
  bool sat = false;
  Valuation model;  // over the free variables, present iff sat
};

// Decision services over the linear real/integer fragment, built on the
// elimination engine. One instance per solve pipeline; independent instances
// are safe to use from different threads.
class SmtBackend {
 public:
  explicit SmtBackend(const Vocabulary& vocab, BackendLimits limits = {})
      : vocab_(&vocab), limits_(limits) {}

  const Vocabulary& vocab() const { return *vocab_; }
  void set_limits(BackendLimits limits) { limits_ = limits; }

  // Quantifier elimination followed by simplification.
  Formula qelim(const Formula& f);
  Formula simplify(const Formula& f) const { return lgs::simplify(f, *vocab_); }

  // Satisfiability with a model over the free variables.
  SatResult check(const Formula& f);

  bool entails(const Formula& f, const Formula& g);
  bool equivalent(const Formula& f, const Formula& g);
  bool is_valid(const Formula& f) { return entails(Formula::tru(), f); }

  // Region difference a \ b as a disjunction of cubes, computed by cube
  // subtraction (no negation is ever expanded).
  Formula diff_regions(const Formula& a, const Formula& b);

  struct Stats {
    std::size_t qelim_calls = 0;
    std::size_t check_calls = 0;
  };
  const Stats& stats() const { return stats_; }

 private:
  detail::Budget fresh_budget() const;
  const Vocabulary* vocab_;
  BackendLimits limits_;
  Stats stats_;
};

}  // namespace lgs
