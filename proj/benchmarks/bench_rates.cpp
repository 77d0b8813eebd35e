#include <benchmark/benchmark.h>

#include "lamcoal/model_spec.hpp"
#include "lamcoal/rate_table.hpp"
#include "lamcoal/rates.hpp"

namespace {

void BM_TotalRate(benchmark::State& state, const char* spec, lamcoal::Route route) {
  const lamcoal::LambdaMeasure m = lamcoal::parse_model(spec);
  const double x = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lamcoal::total_rate(m, x, route));
}
BENCHMARK_CAPTURE(BM_TotalRate, beta_closed, "beta:1.5", lamcoal::Route::automatic)->Arg(100)->Arg(100000);
BENCHMARK_CAPTURE(BM_TotalRate, beta_quadrature, "beta:1.5", lamcoal::Route::quadrature)->Arg(100)->Arg(100000);
BENCHMARK_CAPTURE(BM_TotalRate, logfam, "logfam:0.5", lamcoal::Route::automatic)->Arg(100)->Arg(100000);

void BM_RateTable(benchmark::State& state) {
  const lamcoal::LambdaMeasure m = lamcoal::parse_model("beta:1.5");
  for (auto _ : state) benchmark::DoNotOptimize(lamcoal::RateTable(m, static_cast<int>(state.range(0))).lambda(2));
}
BENCHMARK(BM_RateTable)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
