#include <benchmark/benchmark.h>

#include "qtensor/bingham.hpp"

namespace {

void bm_solve_cold(benchmark::State& state) {
  using namespace qtensor;
  const QuadratureRule& rule = default_rule();
  SymTraceless3 q = uniaxial(0.51, normalized({1, 1, 1}));
  for (auto _ : state) {
    BinghamResult r = solve_bq(q, rule);
    benchmark::DoNotOptimize(r.b.c[0]);
  }
}
BENCHMARK(bm_solve_cold);

void bm_solve_warm(benchmark::State& state) {
  using namespace qtensor;
  const QuadratureRule& rule = default_rule();
  SymTraceless3 q = uniaxial(0.51, normalized({1, 1, 1}));
  BinghamResult prev = solve_bq(q, rule);
  SymTraceless3 q2 = q;
  q2.c[0] += 1e-3;
  for (auto _ : state) {
    BinghamResult r = solve_bq(q2, rule, prev.b);
    benchmark::DoNotOptimize(r.b.c[0]);
  }
}
BENCHMARK(bm_solve_warm);

void bm_moments(benchmark::State& state) {
  using namespace qtensor;
  const QuadratureRule& rule = default_rule();
  SymTraceless3 b = uniaxial(3.6, normalized({1, 2, 0}));
  for (auto _ : state) {
    MomentSet m = moments_of(b, rule);
    benchmark::DoNotOptimize(m.z);
  }
}
BENCHMARK(bm_moments);

}  // namespace

BENCHMARK_MAIN();
