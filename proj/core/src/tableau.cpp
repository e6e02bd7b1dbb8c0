#include "lgs/tableau.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "lgs/errors.hpp"

namespace lgs {

namespace {

// F and G rewritten into U / R so the expansion has four temporal cases.
LtlFormula desugar(const LtlFormula& f) {
  switch (f.kind()) {
    case LtlFormula::Kind::Atom: return f;
    case LtlFormula::Kind::Not: return LtlFormula::lnot(desugar(f.children()[0]));
    case LtlFormula::Kind::And: {
      std::vector<LtlFormula> kids;
      for (const auto& k : f.children()) kids.push_back(desugar(k));
      return LtlFormula::land(std::move(kids));
    }
    case LtlFormula::Kind::Or: {
      std::vector<LtlFormula> kids;
      for (const auto& k : f.children()) kids.push_back(desugar(k));
      return LtlFormula::lor(std::move(kids));
    }
    case LtlFormula::Kind::Next: return LtlFormula::next(desugar(f.children()[0]));
    case LtlFormula::Kind::Until:
      return LtlFormula::until(desugar(f.children()[0]), desugar(f.children()[1]));
    case LtlFormula::Kind::Release:
      return LtlFormula::release(desugar(f.children()[0]), desugar(f.children()[1]));
    case LtlFormula::Kind::Finally:
      return LtlFormula::until(LtlFormula::atom(Formula::tru()), desugar(f.children()[0]));
    case LtlFormula::Kind::Globally:
      return LtlFormula::release(LtlFormula::atom(Formula::fals()), desugar(f.children()[0]));
  }
  throw LgsError("bad kind");
}

struct TableauNode {
  int id;
  std::set<int> incoming;  // -1 encodes the virtual initial node
  std::set<std::string> olds;
  std::set<std::string> news;
  std::set<std::string> nexts;
};

struct Expansion {
  std::map<std::string, LtlFormula> byKey;
  std::vector<TableauNode> done;
  int next_id = 0;

  const LtlFormula& formula(const std::string& key) const { return byKey.at(key); }

  std::string key_of(const LtlFormula& f) {
    std::string k = f.repr();
    byKey.emplace(k, f);
    return k;
  }

  void expand(TableauNode node) {
    if (node.news.empty()) {
      for (auto& r : done) {
        if (r.olds == node.olds && r.nexts == node.nexts) {
          r.incoming.insert(node.incoming.begin(), node.incoming.end());
          return;
        }
      }
      node.id = next_id++;
      done.push_back(node);
      TableauNode succ;
      succ.id = -2;
      succ.incoming = {node.id};
      succ.news = node.nexts;
      expand(std::move(succ));
      return;
    }
    std::string key = *node.news.begin();
    node.news.erase(node.news.begin());
    const LtlFormula f = formula(key);
    switch (f.kind()) {
      case LtlFormula::Kind::Atom: {
        const Formula& c = f.constraint();
        if (c.is_false()) return;  // contradictory node
        if (c.is_true()) {
          expand(std::move(node));
          return;
        }
        // propositional complement present: discard
        std::string negkey = LtlFormula::atom(Formula::neg(c)).repr();
        if (node.olds.count(negkey)) return;
        node.olds.insert(key);
        expand(std::move(node));
        return;
      }
      case LtlFormula::Kind::And: {
        node.olds.insert(key);
        for (const auto& k : f.children()) {
          std::string ck = key_of(k);
          if (!node.olds.count(ck)) node.news.insert(ck);
        }
        expand(std::move(node));
        return;
      }
      case LtlFormula::Kind::Or: {
        node.olds.insert(key);
        for (const auto& k : f.children()) {
          TableauNode branch = node;
          std::string ck = key_of(k);
          if (!branch.olds.count(ck)) branch.news.insert(ck);
          expand(std::move(branch));
        }
        return;
      }
      case LtlFormula::Kind::Next: {
        node.olds.insert(key);
        node.nexts.insert(key_of(f.children()[0]));
        expand(std::move(node));
        return;
      }
      case LtlFormula::Kind::Until: {
        node.olds.insert(key);
        std::string lk = key_of(f.children()[0]);
        std::string rk = key_of(f.children()[1]);
        TableauNode wait = node;  // lhs now, the until again next step
        if (!wait.olds.count(lk)) wait.news.insert(lk);
        wait.nexts.insert(key);
        expand(std::move(wait));
        TableauNode fire = node;  // rhs now
        if (!fire.olds.count(rk)) fire.news.insert(rk);
        expand(std::move(fire));
        return;
      }
      case LtlFormula::Kind::Release: {
        node.olds.insert(key);
        std::string lk = key_of(f.children()[0]);
        std::string rk = key_of(f.children()[1]);
        TableauNode both = node;  // rhs and lhs now: released
        if (!both.olds.count(lk)) both.news.insert(lk);
        if (!both.olds.count(rk)) both.news.insert(rk);
        expand(std::move(both));
        TableauNode hold = node;  // rhs now, release persists
        if (!hold.olds.count(rk)) hold.news.insert(rk);
        hold.nexts.insert(key);
        expand(std::move(hold));
        return;
      }
      default: throw LgsError("tableau: unexpected operator");
    }
  }
};

}  // namespace

SymbolicBuchiAutomaton ltl_to_ba(const LtlFormula& phi, SmtBackend& backend) {
  LtlFormula nnf = desugar(to_nnf(phi));

  Expansion ex;
  TableauNode root;
  root.id = -2;
  root.incoming = {-1};
  root.news = {ex.key_of(nnf)};
  ex.expand(std::move(root));

  // acceptance sets, one per until subformula, in first-creation order of keys
  std::vector<std::string> untils;
  {
    std::set<std::string> seen;
    for (const auto& [key, f] : ex.byKey)
      if (f.kind() == LtlFormula::Kind::Until && seen.insert(key).second) untils.push_back(key);
    std::sort(untils.begin(), untils.end());
  }
  const int k = static_cast<int>(untils.size());

  auto node_guard = [&](const TableauNode& r) {
    std::vector<Formula> lits;
    for (const auto& key : r.olds) {
      const LtlFormula& f = ex.formula(key);
      if (f.kind() == LtlFormula::Kind::Atom) lits.push_back(f.constraint());
    }
    return Formula::conj(std::move(lits));
  };
  auto in_accept_set = [&](const TableauNode& r, int j) {
    const std::string& ukey = untils[static_cast<std::size_t>(j)];
    if (!r.olds.count(ukey)) return true;
    const LtlFormula& u = ex.formula(ukey);
    std::string rhs = u.children()[1].repr();
    return r.olds.count(rhs) != 0;
  };
  // counter advance on entering node r while seeking set j (k means a full
  // round was just completed)
  auto advance = [&](int j, const TableauNode& r) {
    if (k == 0) return 0;
    if (j == k) j = 0;
    if (in_accept_set(r, j)) ++j;
    return j;
  };

  // degeneralized states: (node, counter); guards unsatisfiable under the
  // backend are dropped
  std::map<std::pair<int, int>, int> ids;
  SymbolicBuchiAutomaton out;
  out.view = AcceptanceView::Buchi;
  auto state_id = [&](int node, int ctr) {
    auto it = ids.find({node, ctr});
    if (it != ids.end()) return it->second;
    int id = out.num_states++;
    ids[{node, ctr}] = id;
    return id;
  };

  int init_id = out.num_states++;  // virtual initial state
  out.initial = {init_id};

  std::map<int, const TableauNode*> byId;
  for (const auto& r : ex.done) byId[r.id] = &r;

  std::vector<std::pair<int, int>> work;
  std::set<std::pair<int, int>> queued;
  auto enqueue = [&](int node, int ctr) {
    if (queued.insert({node, ctr}).second) work.push_back({node, ctr});
  };

  for (const auto& r : ex.done) {
    if (!r.incoming.count(-1)) continue;
    Formula g = backend.simplify(node_guard(r));
    if (g.is_false() || !backend.check(g).sat) continue;
    int ctr = advance(0, r);
    out.transitions.push_back({init_id, g, state_id(r.id, ctr)});
    enqueue(r.id, ctr);
  }
  while (!work.empty()) {
    auto [src_node, src_ctr] = work.back();
    work.pop_back();
    int src_id = state_id(src_node, src_ctr);
    for (const auto& r : ex.done) {
      if (!r.incoming.count(src_node)) continue;
      Formula g = backend.simplify(node_guard(r));
      if (g.is_false() || !backend.check(g).sat) continue;
      int ctr = advance(src_ctr, r);
      out.transitions.push_back({src_id, g, state_id(r.id, ctr)});
      enqueue(r.id, ctr);
    }
  }
  for (const auto& [key, id] : ids) {
    if (k == 0 || key.second == k) out.final_states.push_back(id);
  }
  if (k == 0) out.final_states.push_back(init_id);

  out.validate();
  return canonicalize(out);
}

}  // namespace lgs
