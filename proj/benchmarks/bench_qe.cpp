#include <benchmark/benchmark.h>

#include "lgs/parser.hpp"
#include "lgs/solver.hpp"

using namespace lgs;

namespace {

Vocabulary real_vocab() {
  Vocabulary v;
  v.declare("x", Sort::Real);
  v.declare("y", Sort::Real);
  v.declare("z", Sort::Real);
  return v;
}

Vocabulary int_vocab() {
  Vocabulary v;
  v.declare("a", Sort::Int);
  v.declare("b", Sort::Int);
  return v;
}

void BM_qelim_fourier_motzkin(benchmark::State& state) {
  Vocabulary v = real_vocab();
  SmtBackend backend(v);
  Formula body = parse_constraint(
      "y <= x && x + y <= 1 && 0 <= y && z >= y - 2 && z <= x + y", v);
  Formula q = Formula::exists({"y", "z"}, body);
  for (auto _ : state) benchmark::DoNotOptimize(backend.qelim(q));
}
BENCHMARK(BM_qelim_fourier_motzkin);

void BM_qelim_cooper(benchmark::State& state) {
  Vocabulary v = int_vocab();
  SmtBackend backend(v);
  Formula body = parse_constraint("3*a >= b && 2*a <= b + 5 && a != 4", v);
  Formula q = Formula::exists({"a"}, body);
  for (auto _ : state) benchmark::DoNotOptimize(backend.qelim(q));
}
BENCHMARK(BM_qelim_cooper);

void BM_entails_regions(benchmark::State& state) {
  Vocabulary v = int_vocab();
  SmtBackend backend(v);
  std::vector<Formula> cubes;
  for (int i = 0; i < 12; ++i)
    cubes.push_back(parse_constraint(
        "a >= " + std::to_string(i) + " && a <= " + std::to_string(i + 1) + " && b == " +
            std::to_string(i % 3),
        v));
  Formula f = Formula::disj(cubes);
  Formula g = parse_constraint("a >= 0 && a <= 13", v);
  for (auto _ : state) benchmark::DoNotOptimize(backend.entails(f, g));
}
BENCHMARK(BM_entails_regions);

}  // namespace
