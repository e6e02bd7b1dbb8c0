#include <benchmark/benchmark.h>

#include "lgs/dispatch.hpp"

using namespace lgs;

namespace {

void solve_corpus_game(benchmark::State& state, const char* file, EngineChoice engine) {
  Game g = load_game(std::string(LGS_CORPUS_DIR) + "/" + file);
  SolveOptions opts;
  opts.engine = engine;
  opts.base_dir = LGS_CORPUS_DIR;
  for (auto _ : state) {
    Report rep = dispatch(g, opts);
    if (!rep.error.empty()) state.SkipWithError(rep.error.c_str());
    benchmark::DoNotOptimize(rep);
  }
}

void BM_box_safety(benchmark::State& state) {
  solve_corpus_game(state, "box.game.json", EngineChoice::Simple);
}
BENCHMARK(BM_box_safety)->Unit(benchmark::kMillisecond);

void BM_cinderella_c3_safety(benchmark::State& state) {
  solve_corpus_game(state, "cinderella_c3.game.json", EngineChoice::Simple);
}
BENCHMARK(BM_cinderella_c3_safety)->Unit(benchmark::kMillisecond);

void BM_gf_toggle_buchi(benchmark::State& state) {
  solve_corpus_game(state, "gf_toggle.game.json", EngineChoice::Simple);
}
BENCHMARK(BM_gf_toggle_buchi)->Unit(benchmark::kMillisecond);

void BM_sort3_cobuchi(benchmark::State& state) {
  solve_corpus_game(state, "sort3.game.json", EngineChoice::Simple);
}
BENCHMARK(BM_sort3_cobuchi)->Unit(benchmark::kMillisecond);

void BM_elevator_bounded_product(benchmark::State& state) {
  solve_corpus_game(state, "elevator_bounded.game.json", EngineChoice::Auto);
}
BENCHMARK(BM_elevator_bounded_product)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
