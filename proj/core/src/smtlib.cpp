#include "lgs/smtlib.hpp"

#include <sstream>

#include "lgs/errors.hpp"

namespace lgs {

namespace {

std::string smt_name(const std::string& v) {
  if (v.find('\'') != std::string::npos) return "|" + v + "|";
  return v;
}

std::string smt_rat(const Rat& r) {
  std::string num = Int(r.get_num()).get_str();
  bool neg = r < 0;
  if (neg) num = Int(-r.get_num()).get_str();
  std::string core = num;
  if (!is_integer(r)) core = "(/ " + num + " " + Int(r.get_den()).get_str() + ")";
  return neg ? "(- " + core + ")" : core;
}

std::string smt_sum(const std::map<std::string, Rat>& coeffs, const Rat& constant) {
  std::vector<std::string> parts;
  for (const auto& [v, c] : coeffs) {
    if (c == 1)
      parts.push_back(smt_name(v));
    else
      parts.push_back("(* " + smt_rat(c) + " " + smt_name(v) + ")");
  }
  if (constant != 0 || parts.empty()) parts.push_back(smt_rat(constant));
  if (parts.size() == 1) return parts[0];
  std::string s = "(+";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

}  // namespace

std::string to_smt2_term(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Atom: {
      const LinearAtom& a = f.atom_ref();
      std::string lhs = smt_sum(a.coeffs, Rat(0));
      std::string rhs = smt_rat(a.constant);
      switch (a.cmp) {
        case Cmp::Lt: return "(< " + lhs + " " + rhs + ")";
        case Cmp::Le: return "(<= " + lhs + " " + rhs + ")";
        case Cmp::Eq: return "(= " + lhs + " " + rhs + ")";
        case Cmp::Ge: return "(>= " + lhs + " " + rhs + ")";
        case Cmp::Gt: return "(> " + lhs + " " + rhs + ")";
        case Cmp::Ne: return "(not (= " + lhs + " " + rhs + "))";
      }
      throw LgsError("bad cmp");
    }
    case Formula::Kind::Div: {
      const DivAtom& d = f.div_ref();
      std::string inner =
          "(= (mod " + smt_sum(d.coeffs, d.constant) + " " + d.modulus.get_str() + ") 0)";
      return d.negated ? "(not " + inner + ")" : inner;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string s = f.kind() == Formula::Kind::And ? "(and" : "(or";
      for (const auto& k : f.children()) s += " " + to_smt2_term(k);
      return s + ")";
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      // sort information is unavailable here; script-level printing resolves it
      throw LgsError("use to_smt2_script for quantified formulas");
    }
  }
  throw LgsError("bad kind");
}

namespace {

std::string term_with_sorts(const Formula& f, const Vocabulary& vocab) {
  switch (f.kind()) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::string s = f.kind() == Formula::Kind::Exists ? "(exists (" : "(forall (";
      for (const auto& v : f.bound_vars())
        s += "(" + smt_name(v) + " " + (vocab.sort(v) == Sort::Int ? "Int" : "Real") + ")";
      return s + ") " + term_with_sorts(f.body(), vocab) + ")";
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::string s = f.kind() == Formula::Kind::And ? "(and" : "(or";
      for (const auto& k : f.children()) s += " " + term_with_sorts(k, vocab);
      return s + ")";
    }
    default: return to_smt2_term(f);
  }
}

}  // namespace

std::string to_smt2_script(const Formula& f, const Vocabulary& vocab) {
  std::ostringstream os;
  bool any_real = false, any_int = false;
  for (const auto& v : f.free_vars())
    (vocab.sort(v) == Sort::Real ? any_real : any_int) = true;
  std::string logic = any_real && any_int ? "LIRA" : any_real ? "LRA" : "LIA";
  if (f.is_quantifier_free()) logic = "QF_" + logic;
  os << "(set-logic " << logic << ")\n";
  for (const auto& v : f.free_vars()) {
    os << "(declare-fun " << smt_name(v) << " () "
       << (vocab.sort(v) == Sort::Int ? "Int" : "Real") << ")\n";
  }
  os << "(assert " << term_with_sorts(f, vocab) << ")\n";
  return os.str();
}

}  // namespace lgs
