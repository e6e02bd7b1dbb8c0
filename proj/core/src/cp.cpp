#include "lgs/cp.hpp"

#include "lgs/errors.hpp"

namespace lgs {

Formula build_cp(const Game& g, const CpSpec& spec, Perspective persp, const Formula& y) {
  std::vector<std::string> primed, doubleprimed;
  for (const auto& v : g.state_vars()) {
    primed.push_back(Vocabulary::primed(v));
    doubleprimed.push_back(Vocabulary::doubleprimed(v));
  }
  const Formula dom1 = g.domain(1);
  const Formula dom2 = g.domain(2);
  const Formula y1 = rename(y, RenameShift::Prime);
  const Formula y2 = rename(y1, RenameShift::Prime);
  const Formula x1 = rename(spec.x, RenameShift::Prime);
  const Formula env12 = rename(g.env, RenameShift::Prime);  // Env(V', V'')
  const bool per_move =
      spec.kind == CpSpec::Kind::ReachPerMove || spec.kind == CpSpec::Kind::SafePerMove;
  const Formula& con = per_move ? spec.move : g.con;

  const bool controller = persp == Perspective::Controller;

  auto exists1 = [&](Formula body) {
    return Formula::exists(primed, Formula::conj2(dom1, std::move(body)));
  };
  auto forall1 = [&](const Formula& rel, Formula body) {
    return Formula::forall(primed, Formula::implies(Formula::conj2(dom1, rel), std::move(body)));
  };
  auto exists2 = [&](Formula body) {
    return Formula::exists(doubleprimed, Formula::conj({dom2, env12, std::move(body)}));
  };
  auto forall2 = [&](Formula body) {
    return Formula::forall(doubleprimed,
                           Formula::implies(Formula::conj2(dom2, env12), std::move(body)));
  };

  switch (spec.kind) {
    case CpSpec::Kind::StepC:
      return controller ? exists1(Formula::conj2(con, y1)) : forall1(con, y1);
    case CpSpec::Kind::StepE:
      return controller ? Formula::forall(primed, Formula::implies(Formula::conj2(dom1, g.env), y1))
                        : Formula::exists(primed, Formula::conj({dom1, g.env, y1}));
    case CpSpec::Kind::Plain:
      return controller ? exists1(Formula::conj2(con, forall2(y2))) : forall1(con, exists2(y2));
    case CpSpec::Kind::Safe:
    case CpSpec::Kind::SafePerMove:
      return controller ? exists1(Formula::conj({con, x1, forall2(y2)}))
                        : forall1(con, Formula::conj2(x1, exists2(y2)));
    case CpSpec::Kind::Reach:
    case CpSpec::Kind::ReachPerMove:
      return controller ? exists1(Formula::conj2(con, Formula::disj2(x1, forall2(y2))))
                        : forall1(con, Formula::disj2(x1, exists2(y2)));
  }
  throw LgsError("bad cp kind");
}

}  // namespace lgs
