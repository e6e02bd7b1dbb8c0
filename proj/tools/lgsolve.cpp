#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lgs/dispatch.hpp"
#include "lgs/errors.hpp"
#include "lgs/oracle.hpp"

namespace fs = std::filesystem;
using namespace lgs;

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitCapOrUnknown = 2;
constexpr int kExitInputError = 3;

EngineChoice parse_engine(const std::string& s) {
  if (s == "auto") return EngineChoice::Auto;
  if (s == "simple") return EngineChoice::Simple;
  if (s == "product_gf") return EngineChoice::ProductGF;
  if (s == "product_fg") return EngineChoice::ProductFG;
  if (s == "otf") return EngineChoice::Otf;
  throw CLI::ValidationError("--engine", "unknown engine '" + s + "'");
}

std::string dir_of(const std::string& path) {
  fs::path p(path);
  return p.has_parent_path() ? p.parent_path().string() : ".";
}

int exit_code(const Report& rep) {
  if (!rep.error.empty()) return kExitCapOrUnknown;
  if (rep.status == SolveStatus::CapExceeded) return kExitCapOrUnknown;
  if (rep.verdict == Verdict::UnknownUnder || rep.verdict == Verdict::CapReached)
    return kExitCapOrUnknown;
  return kExitSolved;
}

int cmd_solve(const std::string& game_path, SolveOptions opts, const std::string& player) {
  Game g;
  try {
    g = load_game(game_path);
  } catch (const LgsError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
  if (!player.empty()) opts.player_override = player == "E" ? Player::Environment : Player::Controller;
  opts.base_dir = dir_of(game_path);
  Report rep = dispatch(g, opts);
  std::cout << "game:      " << rep.game << "\n";
  std::cout << "engine:    " << rep.engine_used << "\n";
  std::cout << "status:    " << (rep.status == SolveStatus::Converged ? "converged" : "cap-exceeded")
            << "\n";
  std::cout << "verdict:   " << verdict_to_string(rep.verdict) << "\n";
  if (rep.k >= 0) std::cout << "k:         " << rep.k << "\n";
  std::cout << "time:      " << rep.seconds << "s\n";
  std::cout << "region:    " << rep.region.to_surface() << "\n";
  if (rep.region_over) std::cout << "over:      " << rep.region_over->to_surface() << "\n";
  if (rep.strategy)
    std::cout << "strategy:  " << rep.strategy->env_states.size() << " memory / "
              << rep.strategy->ctrl_states.size() << " move states\n";
  for (const auto& v : rep.violations) std::cout << "invariant violation: " << v << "\n";
  if (!rep.error.empty()) std::cout << "error:     " << rep.error << "\n";
  try {
    for (const auto& p : emit_report(rep, g, opts)) std::cout << "wrote " << p << "\n";
  } catch (const LgsError& e) {
    std::cerr << "emit error: " << e.what() << "\n";
    return kExitInputError;
  }
  return exit_code(rep);
}

int cmd_bench(const std::string& dir, SolveOptions opts, const std::string& csv_path, bool all) {
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string p = entry.path().string();
    if (p.size() > 10 && p.substr(p.size() - 10) == ".game.json") files.push_back(p);
  }
  std::sort(files.begin(), files.end());
  std::ostringstream csv;
  csv << "game,engine,iterations,k,seconds,verdict\n";
  int worst = kExitSolved;
  for (const auto& f : files) {
    Game g;
    try {
      g = load_game(f);
    } catch (const LgsError& e) {
      std::cerr << f << ": input error: " << e.what() << "\n";
      worst = std::max(worst, kExitInputError);
      continue;
    }
    if (!all && g.note.find("slow") != std::string::npos) {
      std::cout << g.name << ": skipped (marked slow; pass --all to include)\n";
      continue;
    }
    SolveOptions o = opts;
    o.base_dir = dir_of(f);
    Report rep = dispatch(g, o);
    csv << rep.game << "," << rep.engine_used << "," << rep.iterations << ","
        << (rep.k >= 0 ? std::to_string(rep.k) : "") << "," << rep.seconds << ","
        << verdict_to_string(rep.verdict) << "\n";
    std::cout << rep.game << ": " << rep.engine_used << " "
              << (rep.status == SolveStatus::Converged ? "converged" : "cap") << " "
              << verdict_to_string(rep.verdict) << " in " << rep.seconds << "s";
    if (g.paper_time_s && *g.paper_time_s > 0)
      std::cout << " (" << rep.seconds / *g.paper_time_s << "x the reported time)";
    if (!rep.error.empty()) std::cout << " [error: " << rep.error << "]";
    std::cout << "\n";
    worst = std::max(worst, exit_code(rep));
  }
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    out << csv.str();
    std::cout << "wrote " << csv_path << "\n";
  } else {
    std::cout << csv.str();
  }
  return worst;
}

int cmd_simulate(const std::string& game_path, const std::string& strategy_path, int plays,
                 int steps, std::uint64_t seed) {
  Game g;
  StrategyAutomaton strat;
  try {
    g = load_game(game_path);
    std::ifstream in(strategy_path);
    if (!in) throw SchemaError("cannot open strategy file '" + strategy_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    if (strategy_path.size() > 4 && strategy_path.substr(strategy_path.size() - 4) == ".dot")
      strat = strategy_from_dot(ss.str(), g.vocab);
    else
      strat = strategy_from_json(ss.str(), g.vocab);
  } catch (const LgsError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  }

  SmtBackend backend(g.vocab);
  Valuation start;
  if (g.init) {
    SatResult r = backend.check(Formula::conj2(*g.init, g.domain(0)));
    if (!r.sat) {
      std::cerr << "initial region is empty\n";
      return kExitInputError;
    }
    for (const auto& v : g.state_vars())
      start[v] = r.model.count(v) ? r.model[v] : Rat(0);
  } else {
    // fall back to a state of the strategy's initial memory region
    const auto& region = strat.env_states[static_cast<std::size_t>(strat.initial_env)].region;
    SatResult r = backend.check(Formula::conj2(region, g.domain(0)));
    if (!r.sat) {
      std::cerr << "strategy initial region is empty\n";
      return kExitInputError;
    }
    for (const auto& v : g.state_vars())
      start[v] = r.model.count(v) ? r.model[v] : Rat(0);
  }

  SpecClass cls = classify(g.objective);
  std::optional<Formula> monitor;
  if (cls.kind != SpecClass::Kind::General) monitor = cls.predicate;

  int holes = 0, violations = 0, hits = 0;
  for (int p = 0; p < plays; ++p) {
    PlayResult r = simulate(g, strat, start, steps, seed + static_cast<std::uint64_t>(p), monitor);
    holes += r.strategy_hole;
    violations += r.safety_violated;
    hits += r.target_hit;
  }
  std::cout << "plays:             " << plays << " x " << steps << " steps from ";
  for (const auto& [v, val] : start) std::cout << v << "=" << rat_to_string(val) << " ";
  std::cout << "\n";
  std::cout << "strategy holes:    " << holes << "\n";
  if (monitor) {
    std::cout << "predicate misses:  " << violations << "\n";
    std::cout << "predicate visits:  " << hits << "\n";
  }
  return holes == 0 ? kExitSolved : kExitCapOrUnknown;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lgsolve: symbolic solver for two-player logical games with LTL objectives"};
  app.require_subcommand(1);

  std::string engine = "auto", player, emit, out_dir = ".", csv_path;
  int cap = 500, kmax = 10, timeout_ms = 0, plays = 1, steps = 100;
  std::uint64_t seed = 1;
  bool all = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--engine", engine, "auto|simple|product_gf|product_fg|otf");
    cmd->add_option("--cap", cap, "fixpoint iteration cap");
    cmd->add_option("--kmax", kmax, "largest determinization bound");
    cmd->add_option("--timeout-ms", timeout_ms, "per-query backend deadline");
    cmd->add_option("--player", player, "C or E (overrides the game file)");
  };

  auto* solve = app.add_subcommand("solve", "solve one game file");
  std::string game_path, strategy_path, bench_dir;
  solve->add_option("game", game_path, "game JSON file")->required();
  add_common(solve);
  solve->add_option("--emit", emit, "comma list: region_smt2,strategy_dot,strategy_json,report_json");
  solve->add_option("--out", out_dir, "output directory for emitted files");

  auto* bench = app.add_subcommand("bench", "run every .game.json in a directory");
  bench->add_option("dir", bench_dir, "corpus directory")->required();
  add_common(bench);
  bench->add_option("--csv", csv_path, "write the results table to this file");
  bench->add_flag("--all", all, "include games marked slow");

  auto* sim = app.add_subcommand("simulate", "play a strategy against sampled moves");
  sim->add_option("game", game_path, "game JSON file")->required();
  sim->add_option("strategy", strategy_path, "strategy .json or .dot")->required();
  sim->add_option("--plays", plays, "number of plays");
  sim->add_option("--steps", steps, "rounds per play");
  sim->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  SolveOptions opts;
  try {
    opts.engine = parse_engine(engine);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  }
  opts.iteration_cap = cap;
  opts.k_max = kmax;
  opts.backend_timeout_ms = timeout_ms;
  opts.out_dir = out_dir;
  {
    std::stringstream ss(emit);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) opts.emit.insert(item);
  }

  try {
    if (*solve) return cmd_solve(game_path, opts, player);
    if (*bench) return cmd_bench(bench_dir, opts, csv_path, all);
    if (*sim) return cmd_simulate(game_path, strategy_path, plays, steps, seed);
  } catch (const SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const LgsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapOrUnknown;
  }
  return kExitInputError;
}
