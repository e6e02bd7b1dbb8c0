#include "lgs/dispatch.hpp"

#include <chrono>
#include <fstream>

#include "json.hpp"
#include "lgs/errors.hpp"
#include "lgs/smtlib.hpp"
#include "lgs/tableau.hpp"

namespace lgs {

std::string verdict_to_string(Verdict v) {
  switch (v) {
    case Verdict::Realizable: return "realizable";
    case Verdict::Unrealizable: return "unrealizable";
    case Verdict::Partial: return "partial";
    case Verdict::UnknownUnder: return "unknown";
    case Verdict::CapReached: return "cap-reached";
    case Verdict::RegionOnly: return "region-only";
  }
  throw LgsError("bad verdict");
}

Verdict realizability_exact(SmtBackend& backend, const Formula& region, const Formula& init,
                            const Formula& dom) {
  Formula init_d = Formula::conj2(init, dom);
  if (backend.entails(init_d, region)) return Verdict::Realizable;
  if (!backend.check(Formula::conj2(init_d, region)).sat) return Verdict::Unrealizable;
  return Verdict::Partial;
}

Verdict realizability_bounds(SmtBackend& backend, const Formula& under, const Formula& over,
                             const Formula& init, const Formula& dom) {
  Formula init_d = Formula::conj2(init, dom);
  if (backend.entails(init_d, under)) return Verdict::Realizable;
  if (!backend.check(Formula::conj2(init_d, over)).sat) return Verdict::Unrealizable;
  return Verdict::UnknownUnder;
}

namespace {

std::string resolve_path(const std::string& base, const std::string& p) {
  if (p.empty() || p[0] == '/' || base.empty()) return p;
  return base + "/" + p;
}

const char* engine_name(SpecClass::Kind k) {
  switch (k) {
    case SpecClass::Kind::Safety: return "simple-safety";
    case SpecClass::Kind::Reachability: return "simple-reachability";
    case SpecClass::Kind::Buchi: return "simple-buchi";
    case SpecClass::Kind::CoBuchi: return "simple-cobuchi";
    default: return "simple";
  }
}

struct ProductRun {
  SolveResult solve;
  Formula projected = Formula::fals();
  std::optional<StrategyAutomaton> lifted;
};

ProductRun run_product(const Game& g, const SymbolicBuchiAutomaton& aut, ProductPolarity pol,
                       Perspective persp, SmtBackend& backend, const EngineOptions& eopts) {
  Game prod = product(g, aut, pol, backend);
  SmtBackend pb(prod.vocab);
  ProductRun run;
  run.solve = pol == ProductPolarity::Accepting ? solve_buchi(prod, persp, pb, eopts)
                                                : solve_cobuchi(prod, persp, pb, eopts);
  std::string qvar = product_state_var(prod);
  run.projected = project_initial_q(run.solve.region, qvar, aut.initial[0], prod.vocab);
  if (run.solve.strategy && run.solve.strategy->memoryless())
    run.lifted = lift_strategy(*run.solve.strategy, aut, qvar, pb);
  return run;
}

void fill_from_solve(Report& rep, const SolveResult& r) {
  rep.status = r.status;
  rep.approx = r.approx;
  rep.iterations = r.artifacts.iterations;
  rep.violations = r.artifacts.violations;
  for (const auto& it : r.artifacts.iterates) rep.iterate_sizes.push_back(it.node_count());
  for (const auto& c : r.artifacts.frontier) rep.frontier_surface.push_back(c.to_surface());
}

}  // namespace

Report dispatch(const Game& game, const SolveOptions& opts) {
  Game g = game;
  if (opts.player_override) g.player = *opts.player_override;
  Perspective persp = perspective_of(g.player);

  Report rep;
  rep.game = g.name;
  auto started = std::chrono::steady_clock::now();
  auto finish = [&](Report& r) -> Report& {
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
  };

  BackendLimits limits;
  limits.timeout_ms = opts.backend_timeout_ms;
  SmtBackend backend(g.vocab, limits);
  EngineOptions eopts;
  eopts.iteration_cap = opts.iteration_cap;

  SpecClass cls = classify(g.objective);
  try {
    // simple path (Auto follows the driver order: simple first)
    if (opts.engine == EngineChoice::Simple ||
        (opts.engine == EngineChoice::Auto && cls.kind != SpecClass::Kind::General)) {
      if (cls.kind == SpecClass::Kind::General)
        throw LgsError("engine 'simple' requires a simple objective");
      SolveResult r = solve_simple(g, persp, backend, eopts);
      rep.engine_used = engine_name(cls.kind);
      rep.region = r.region;
      rep.strategy = r.strategy;
      fill_from_solve(rep, r);
    } else if (opts.engine != EngineChoice::Otf &&
               (opts.engine == EngineChoice::Auto || opts.engine == EngineChoice::ProductGF ||
                opts.engine == EngineChoice::ProductFG)) {
      // automata for the objective and its negation
      std::optional<SymbolicBuchiAutomaton> a_psi, a_negpsi;
      auto get_psi = [&]() {
        if (!a_psi) {
          a_psi = g.automaton_path
                      ? load_automaton(resolve_path(opts.base_dir, *g.automaton_path), g.vocab)
                      : ltl_to_ba(g.objective, backend);
          a_psi = canonicalize(complete(*a_psi, backend));
        }
        return *a_psi;
      };
      auto get_negpsi = [&]() {
        if (!a_negpsi) {
          a_negpsi = g.automaton_neg_path
                         ? load_automaton(resolve_path(opts.base_dir, *g.automaton_neg_path),
                                          g.vocab)
                         : ltl_to_ba(negate_nnf(g.objective), backend);
          a_negpsi = canonicalize(complete(*a_negpsi, backend));
        }
        return *a_negpsi;
      };

      bool try_gf = opts.engine != EngineChoice::ProductFG;
      bool try_fg = opts.engine != EngineChoice::ProductGF;
      bool done = false;
      if (try_gf && is_deterministic(get_psi(), backend)) {
        ProductRun run = run_product(g, get_psi(), ProductPolarity::Accepting, persp, backend, eopts);
        rep.engine_used = "product-gf";
        rep.region = run.projected;
        rep.strategy = run.lifted;
        fill_from_solve(rep, run.solve);
        done = true;
      } else if (try_fg && is_deterministic(get_negpsi(), backend)) {
        ProductRun run =
            run_product(g, get_negpsi(), ProductPolarity::Rejecting, persp, backend, eopts);
        rep.engine_used = "product-fg";
        rep.region = run.projected;
        rep.strategy = run.lifted;
        fill_from_solve(rep, run.solve);
        done = true;
      }
      if (!done) {
        if (opts.engine == EngineChoice::ProductGF)
          throw LgsError("engine 'product_gf' requires a deterministic objective automaton");
        if (opts.engine == EngineChoice::ProductFG)
          throw LgsError("engine 'product_fg' requires a deterministic negated automaton");
        // neither deterministic: counting determinization loop
        OtfOptions oopts;
        oopts.k_max = opts.k_max;
        oopts.engine = eopts;
        OtfResult r = otf_loop(g, get_psi(), get_negpsi(), backend, oopts);
        rep.engine_used = "otf";
        rep.region = r.under;
        rep.region_over = r.over;
        rep.k = r.k_used;
        rep.violations = r.violations;
        rep.status = r.status == OtfStatus::Converged ? SolveStatus::Converged
                                                      : SolveStatus::CapExceeded;
        rep.approx = r.status == OtfStatus::Converged ? Approx::Exact : Approx::Under;
      }
    } else {
      // forced OTF
      std::optional<SymbolicBuchiAutomaton> a_psi, a_negpsi;
      a_psi = g.automaton_path
                  ? load_automaton(resolve_path(opts.base_dir, *g.automaton_path), g.vocab)
                  : ltl_to_ba(g.objective, backend);
      a_negpsi = g.automaton_neg_path
                     ? load_automaton(resolve_path(opts.base_dir, *g.automaton_neg_path), g.vocab)
                     : ltl_to_ba(negate_nnf(g.objective), backend);
      a_psi = canonicalize(complete(*a_psi, backend));
      a_negpsi = canonicalize(complete(*a_negpsi, backend));
      OtfOptions oopts;
      oopts.k_max = opts.k_max;
      oopts.engine = eopts;
      OtfResult r = otf_loop(g, *a_psi, *a_negpsi, backend, oopts);
      rep.engine_used = "otf";
      rep.region = r.under;
      rep.region_over = r.over;
      rep.k = r.k_used;
      rep.violations = r.violations;
      rep.status =
          r.status == OtfStatus::Converged ? SolveStatus::Converged : SolveStatus::CapExceeded;
      rep.approx = r.status == OtfStatus::Converged ? Approx::Exact : Approx::Under;
    }
  } catch (const LgsError& e) {
    rep.error = e.what();
    rep.verdict = Verdict::CapReached;
    return finish(rep);
  }

  // realizability from the initial region, when one is declared
  if (g.init) {
    if (rep.status == SolveStatus::CapExceeded) {
      // an approximation can still separate, but never claims unrealizable
      if (rep.approx == Approx::Under && backend.entails(Formula::conj2(*g.init, g.domain(0)),
                                                         rep.region))
        rep.verdict = Verdict::Realizable;
      else
        rep.verdict = Verdict::CapReached;
    } else if (rep.region_over) {
      rep.verdict = realizability_bounds(backend, rep.region, *rep.region_over, *g.init,
                                         g.domain(0));
    } else {
      rep.verdict = realizability_exact(backend, rep.region, *g.init, g.domain(0));
    }
  } else {
    rep.verdict = Verdict::RegionOnly;
  }
  return finish(rep);
}

std::string report_to_json(const Report& rep, const Game& g) {
  nlohmann::json j;
  j["game"] = rep.game;
  j["engine"] = rep.engine_used;
  j["verdict"] = verdict_to_string(rep.verdict);
  j["status"] = rep.status == SolveStatus::Converged ? "converged" : "cap-exceeded";
  switch (rep.approx) {
    case Approx::Exact: j["approx"] = "exact"; break;
    case Approx::Under: j["approx"] = "under"; break;
    case Approx::Over: j["approx"] = "over"; break;
    case Approx::Unknown: j["approx"] = "unknown"; break;
  }
  j["iterations"] = rep.iterations;
  if (rep.k >= 0) j["k"] = rep.k;
  j["seconds"] = rep.seconds;
  j["region_smt2"] = to_smt2_script(rep.region, g.vocab);
  if (rep.region_over) j["region_over_smt2"] = to_smt2_script(*rep.region_over, g.vocab);
  j["iterate_sizes"] = rep.iterate_sizes;
  j["frontier"] = rep.frontier_surface;
  j["violations"] = rep.violations;
  j["has_strategy"] = rep.strategy.has_value();
  if (!rep.error.empty()) j["error"] = rep.error;
  return j.dump(2) + "\n";
}

std::vector<std::string> emit_report(const Report& rep, const Game& g, const SolveOptions& opts) {
  std::vector<std::string> paths;
  auto write = [&](const std::string& name, const std::string& content) {
    std::string path = opts.out_dir + "/" + name;
    std::ofstream out(path);
    if (!out) throw LgsError("cannot write '" + path + "'");
    out << content;
    paths.push_back(path);
  };
  if (opts.emit.count("region_smt2")) write(rep.game + ".region.smt2", to_smt2_script(rep.region, g.vocab));
  if (rep.strategy) {
    if (opts.emit.count("strategy_dot")) write(rep.game + ".strategy.dot", strategy_to_dot(*rep.strategy));
    if (opts.emit.count("strategy_json"))
      write(rep.game + ".strategy.json", strategy_to_json(*rep.strategy));
  }
  if (opts.emit.count("report_json")) write(rep.game + ".report.json", report_to_json(rep, g));
  return paths;
}

}  // namespace lgs
