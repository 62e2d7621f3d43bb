// Serial reference vs OpenMP grid evaluation. Run with OMP_NUM_THREADS set
// to compare thread counts.

#include <benchmark/benchmark.h>

#include <vector>

#include "pqbernstein/analysis.hpp"
#include "pqbernstein/kernels.hpp"

namespace {

using pqb::Grid;
using pqb::OperatorSpec;
using pqb::PQParams;
using pqb::PreparedOperator;
using pqb::TargetFunction;

template <bool Parallel>
void BM_Evaluate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto grid = Grid::uniform(static_cast<int>(state.range(1)));
  const PreparedOperator op(OperatorSpec(n, PQParams(0.98, 0.95)));
  const auto samples = op.sample(TargetFunction::builtin("paper_cubic"));
  std::vector<double> out(grid.points().size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      pqb::kernels::evaluate_parallel(op, samples, grid.points(), out);
    } else {
      pqb::kernels::evaluate_serial(op, samples, grid.points(), out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(out.size()));
}

void BM_SupErrorSerial(benchmark::State& state) {
  const OperatorSpec spec(static_cast<int>(state.range(0)), PQParams(0.98, 0.95));
  const auto grid = Grid::uniform();
  const auto f = TargetFunction::builtin("sin_pi");
  for (auto _ : state) benchmark::DoNotOptimize(pqb::sup_error(spec, f, grid, pqb::Execution::serial));
}

void BM_SupErrorParallel(benchmark::State& state) {
  const OperatorSpec spec(static_cast<int>(state.range(0)), PQParams(0.98, 0.95));
  const auto grid = Grid::uniform();
  const auto f = TargetFunction::builtin("sin_pi");
  for (auto _ : state) {
    benchmark::DoNotOptimize(pqb::sup_error(spec, f, grid, pqb::Execution::parallel));
  }
}

}  // namespace

BENCHMARK(BM_Evaluate<false>)->ArgsProduct({{10, 50, 200}, {1001, 10001}});
BENCHMARK(BM_Evaluate<true>)->ArgsProduct({{10, 50, 200}, {1001, 10001}});
BENCHMARK(BM_SupErrorSerial)->Arg(50)->Arg(200);
BENCHMARK(BM_SupErrorParallel)->Arg(50)->Arg(200);

BENCHMARK_MAIN();
