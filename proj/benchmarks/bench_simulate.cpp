#include <benchmark/benchmark.h>

#include "lamcoal/model_spec.hpp"
#include "lamcoal/rate_table.hpp"
#include "lamcoal/rng.hpp"
#include "lamcoal/simulate.hpp"

namespace {

void BM_Run(benchmark::State& state, const char* spec) {
  const int n = static_cast<int>(state.range(0));
  const lamcoal::RateTable table(lamcoal::parse_model(spec), n);
  lamcoal::RunOptions opts;
  opts.a_max = 5;
  lamcoal::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(lamcoal::run(n, table, opts, rng).total);
}
BENCHMARK_CAPTURE(BM_Run, kingman, "kingman")->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, bs, "bs")->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Run, beta, "beta:1.5")->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
