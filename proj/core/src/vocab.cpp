#include "lgs/vocab.hpp"

#include "lgs/errors.hpp"

namespace lgs {

void Vocabulary::declare(const std::string& name, Sort sort, VarRole role) {
  if (name.empty() || tier(name) != 0)
    throw SchemaError("variable name must be unprimed and nonempty: '" + name + "'");
  if (contains(name)) throw SchemaError("duplicate variable '" + name + "'");
  auto add = [&](const std::string& n, VarRole r) {
    index_[n] = vars_.size();
    vars_.push_back(VarDecl{n, sort, r});
  };
  add(name, role);
  add(primed(name), VarRole::Primed);
  add(doubleprimed(name), VarRole::DoublePrimed);
}

const VarDecl& Vocabulary::decl(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw SchemaError("undeclared variable '" + name + "'");
  return vars_[it->second];
}

std::vector<std::string> Vocabulary::state_names() const {
  std::vector<std::string> out;
  for (const auto& v : vars_)
    if (v.role == VarRole::State || v.role == VarRole::Automaton) out.push_back(v.name);
  return out;
}

int Vocabulary::tier(const std::string& name) {
  int t = 0;
  std::size_t n = name.size();
  while (n > 0 && name[n - 1] == '\'') {
    ++t;
    --n;
  }
  return t;
}

std::string Vocabulary::shifted_down(const std::string& name) {
  if (tier(name) == 0) throw SchemaError("cannot unprime state variable '" + name + "'");
  return name.substr(0, name.size() - 1);
}

std::string Vocabulary::base_name(const std::string& name) {
  return name.substr(0, name.size() - static_cast<std::size_t>(tier(name)));
}

}  // namespace lgs
