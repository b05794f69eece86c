#include <benchmark/benchmark.h>

#include <vector>

#include "sparsevar/sparsevar.hpp"

using namespace sparsevar;

namespace {

TimePanel bench_panel(Index k, Index t) {
  SyntheticSpec spec;
  spec.k = k;
  spec.p = 2;
  spec.t = t;
  spec.seed = 42;
  spec.recipe = {0.1, 0.3, 43};
  return simulate(spec).panel;
}

void BM_LassoFit(benchmark::State& state) {
  const Index k = state.range(0);
  const auto [z, stats] = standardize(bench_panel(k, 1000));
  const auto e = lag_embed(z, 2);
  LassoConfig cfg;
  cfg.lambda = 0.05 * lambda_max(e);
  for (auto _ : state) benchmark::DoNotOptimize(fit_lasso_var(e, cfg));
}
BENCHMARK(BM_LassoFit)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_FglsFit(benchmark::State& state) {
  const auto [z, stats] = standardize(bench_panel(10, 1000));
  const auto e = lag_embed(z, 2);
  LassoConfig cfg;
  cfg.lambda = 0.05 * lambda_max(e);
  for (auto _ : state) benchmark::DoNotOptimize(fit_fgls_lasso_var(e, cfg));
}
BENCHMARK(BM_FglsFit)->Unit(benchmark::kMillisecond);

void BM_SelectLambda(benchmark::State& state) {
  const auto panel = bench_panel(10, 1000);
  LassoConfig cfg;
  cfg.grid = {30, 1e-3};
  for (auto _ : state) benchmark::DoNotOptimize(select_lambda(panel, 2, cfg, {3, 100, 700}, Estimator::Lasso));
}
BENCHMARK(BM_SelectLambda)->Unit(benchmark::kMillisecond);

void BM_EpaTest(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  CounterRng r1(1, 1), r2(1, 2);
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = r1.normal();
    b[i] = r2.normal();
  }
  for (auto _ : state) benchmark::DoNotOptimize(epa_test(a, b, 4));
}
BENCHMARK(BM_EpaTest)->Arg(100)->Arg(10000);

void BM_PdsGranger(benchmark::State& state) {
  const auto panel = bench_panel(12, 500);
  GrangerSpec spec;
  spec.effect = panel.names[1];
  spec.causes = {panel.names[0]};
  spec.p = 2;
  for (auto _ : state) benchmark::DoNotOptimize(pds_granger(panel, spec));
}
BENCHMARK(BM_PdsGranger)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
