#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace lgs {

enum class Sort { Int, Real };

enum class VarRole { State, Primed, DoublePrimed, Automaton };

struct VarDecl {
  std::string name;
  Sort sort = Sort::Int;
  VarRole role = VarRole::State;
};

// A set of declared variables. Declaring a state variable x also declares x'
// and x''; the primed names are derived, never chosen. Names are unique.
class Vocabulary {
 public:
  // Declares name, name' and name''. Role of the base is State (or Automaton).
  void declare(const std::string& name, Sort sort, VarRole role = VarRole::State);

  bool contains(const std::string& name) const { return index_.count(name) != 0; }
  const VarDecl& decl(const std::string& name) const;
  Sort sort(const std::string& name) const { return decl(name).sort; }

  // State-tier variable names in declaration order (no primes).
  std::vector<std::string> state_names() const;
  const std::vector<VarDecl>& all() const { return vars_; }

  static std::string primed(const std::string& name) { return name + "'"; }
  static std::string doubleprimed(const std::string& name) { return name + "''"; }

  // Tier of a name: 0 for x, 1 for x', 2 for x''.
  static int tier(const std::string& name);
  // Drops one prime tier; name must have at least one.
  static std::string shifted_down(const std::string& name);
  static std::string base_name(const std::string& name);

 private:
  std::vector<VarDecl> vars_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace lgs
